"""Exponent arithmetic for the polynomial core.

Exponents of generators are rational-linear forms in named parameters:
c0 + sum_i c_i * p_i with exact rational c's.  Parameter-free values are
stored as plain int (when integral) or Fraction, so the common integer
case stays cheap.  Parameter-carrying values use LinExp.
"""

from fractions import Fraction

_ZERO = Fraction(0)


class LinExp:
    """Rational-linear form in parameters; immutable and hashable.

    `terms` is a sorted tuple of (parameter-name, Fraction) pairs with
    nonzero coefficients; a LinExp always has at least one term
    (parameter-free values are demoted to int/Fraction by `make_exp`).
    """

    __slots__ = ("const", "terms", "_hash")

    def __init__(self, const, terms):
        self.const = Fraction(const)
        self.terms = tuple(terms)
        self._hash = hash((self.const, self.terms))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if isinstance(other, LinExp):
            return self.const == other.const and self.terms == other.terms
        return False

    def __repr__(self):
        bits = [f"{c}*{n}" for n, c in self.terms]
        if self.const or not bits:
            bits.append(str(self.const))
        return "LinExp(" + " + ".join(bits) + ")"


def make_exp(const, term_map=None):
    """Build a canonical exponent from a rational constant and a
    {name: Fraction} map; drops zero coefficients and demotes
    parameter-free results."""
    const = Fraction(const)
    terms = ()
    if term_map:
        terms = tuple(sorted((n, Fraction(c)) for n, c in term_map.items() if c != 0))
    if not terms:
        if const.denominator == 1:
            return int(const)
        return const
    return LinExp(const, terms)


def exp_is_number(e):
    return not isinstance(e, LinExp)


def exp_add(a, b):
    if not isinstance(a, LinExp) and not isinstance(b, LinExp):
        s = a + b
        if isinstance(s, Fraction) and s.denominator == 1:
            return int(s)
        return s
    ca = a.const if isinstance(a, LinExp) else Fraction(a)
    cb = b.const if isinstance(b, LinExp) else Fraction(b)
    tm = {}
    if isinstance(a, LinExp):
        for n, c in a.terms:
            tm[n] = tm.get(n, _ZERO) + c
    if isinstance(b, LinExp):
        for n, c in b.terms:
            tm[n] = tm.get(n, _ZERO) + c
    return make_exp(ca + cb, tm)


def exp_neg(a):
    if not isinstance(a, LinExp):
        return -a
    return LinExp(-a.const, tuple((n, -c) for n, c in a.terms))


def exp_sub(a, b):
    return exp_add(a, exp_neg(b))


def exp_scale(a, c):
    """Multiply an exponent by a rational scalar."""
    c = Fraction(c)
    if c == 0:
        return 0
    if not isinstance(a, LinExp):
        return make_exp(Fraction(a) * c)
    return make_exp(a.const * c, {n: k * c for n, k in a.terms})


def exp_mul(a, b):
    """Product of two exponents; fails if both carry parameters (the
    result would no longer be rational-linear)."""
    if not isinstance(a, LinExp):
        return exp_scale(b, a)
    if not isinstance(b, LinExp):
        return exp_scale(a, b)
    raise ValueError("exponent product is not rational-linear in parameters")


def exp_is_zero(a):
    return a == 0


def exp_is_one(a):
    return a == 1


def exp_is_integer(a):
    if isinstance(a, LinExp):
        return False
    return Fraction(a).denominator == 1


def exp_int_frac(a):
    """Split a parameter-free exponent into (floor, fractional in [0,1))."""
    f = Fraction(a)
    n = f.numerator // f.denominator
    return n, f - n


def exp_const_frac_split(a):
    """Split any exponent into (integer part of the constant, remainder
    whose constant lies in [0,1))."""
    if not isinstance(a, LinExp):
        n, r = exp_int_frac(a)
        return n, make_exp(r)
    n = a.const.numerator // a.const.denominator
    return n, LinExp(a.const - n, a.terms)


def exp_sort_key(a):
    if isinstance(a, LinExp):
        return (a.terms, a.const)
    return ((), Fraction(a))


def exp_weight(a):
    """Numeric surrogate used for graded monomial ordering."""
    if isinstance(a, LinExp):
        return a.const + sum(c for _, c in a.terms)
    return Fraction(a)


def exp_params(a):
    if isinstance(a, LinExp):
        return [n for n, _ in a.terms]
    return []


def exp_eval(a, assignment):
    """Evaluate to float given parameter values."""
    if not isinstance(a, LinExp):
        return float(a)
    v = float(a.const)
    for n, c in a.terms:
        if n not in assignment:
            raise KeyError(f"unassigned parameter {n!r} in exponent")
        v += float(c) * float(assignment[n])
    return v


def exp_subs_params(a, rat_map):
    """Replace parameters by exact rationals (or rename them); values in
    `rat_map` may be Fraction/int or str (rename)."""
    if not isinstance(a, LinExp):
        return a
    const = a.const
    tm = {}
    for n, c in a.terms:
        if n in rat_map:
            v = rat_map[n]
            if isinstance(v, str):
                tm[v] = tm.get(v, _ZERO) + c
            else:
                const += c * Fraction(v)
        else:
            tm[n] = tm.get(n, _ZERO) + c
    return make_exp(const, tm)
