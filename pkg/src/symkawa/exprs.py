"""Immutable expression trees over exact rationals.

Node kinds: rational constants, named symbols (independent variables t,
x and parameters), jet coordinates of u(t,x), opaque function atoms with
partial-derivative tags, n-ary sums and products, powers, and the unary
kernels exp/ln/sin/cos/arctan (sqrt is rewritten to a 1/2 power on
construction).

Construction enforces the structural invariants: sums and products are
flattened, rational parts folded, operands sorted under a fixed total
order; power exponents must be rational-linear in parameters.  Semantic
rewrites (power collision, like-term collection, zero testing) belong to
`calculus.normalize`, not to the constructors; the only constructor-level
rewrites are (e^g)^h -> e^(g*h), ln(e^g) -> g and sqrt -> ^(1/2).
"""

from fractions import Fraction

from .linexp import LinExp, exp_add, exp_mul, make_exp

MAX_X_ORDER = 10


class ExprError(ValueError):
    pass


class Expr:
    __slots__ = ("_hash", "_key")

    def sort_key(self):
        k = self._key
        if k is None:
            k = self._key = self._build_key()
        return k

    def __hash__(self):
        return self._hash

    def __add__(self, other):
        return add(self, to_expr(other))

    __radd__ = __add__

    def __sub__(self, other):
        return add(self, mul(MINUS_ONE, to_expr(other)))

    def __rsub__(self, other):
        return add(to_expr(other), mul(MINUS_ONE, self))

    def __mul__(self, other):
        return mul(self, to_expr(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return mul(self, pow_(to_expr(other), MINUS_ONE))

    def __rtruediv__(self, other):
        return mul(to_expr(other), pow_(self, MINUS_ONE))

    def __pow__(self, other):
        return pow_(self, to_expr(other))

    def __neg__(self):
        return mul(MINUS_ONE, self)

    def __repr__(self):
        return to_string(self)


class Rat(Expr):
    __slots__ = ("value",)
    rank = 0

    def __init__(self, value):
        self.value = Fraction(value)
        self._hash = hash(("R", self.value))
        self._key = (0, self.value)

    def _build_key(self):
        return self._key

    def __eq__(self, other):
        return isinstance(other, Rat) and self.value == other.value


    __hash__ = Expr.__hash__

class Sym(Expr):
    __slots__ = ("name",)
    rank = 1

    def __init__(self, name):
        self.name = name
        self._hash = hash(("S", name))
        self._key = (1, name)

    def _build_key(self):
        return self._key

    def __eq__(self, other):
        return isinstance(other, Sym) and self.name == other.name


    __hash__ = Expr.__hash__

class Jet(Expr):
    """Jet coordinate of u: t-order a in {0,1}, x-order b in 0..10;
    (0,0) is u itself."""

    __slots__ = ("a", "b")
    rank = 2

    def __init__(self, a, b):
        if a not in (0, 1):
            raise ExprError(f"jet t-order must be 0 or 1, got {a}")
        if not 0 <= b <= MAX_X_ORDER:
            raise ExprError(f"jet x-order must be in 0..{MAX_X_ORDER}, got {b}")
        self.a = a
        self.b = b
        self._hash = hash(("J", a, b))
        self._key = (2, a, b)

    def _build_key(self):
        return self._key

    def __eq__(self, other):
        return isinstance(other, Jet) and self.a == other.a and self.b == other.b


    __hash__ = Expr.__hash__

class Atom(Expr):
    """Opaque function atom: name, argument expressions, and one
    derivative order per argument slot."""

    __slots__ = ("name", "args", "orders")
    rank = 3

    def __init__(self, name, args, orders=None):
        args = tuple(to_expr(a) for a in args)
        if orders is None:
            orders = (0,) * len(args)
        orders = tuple(int(k) for k in orders)
        if len(orders) != len(args):
            raise ExprError("atom orders must match argument count")
        if any(k < 0 for k in orders):
            raise ExprError("atom derivative orders must be nonnegative")
        if not args:
            raise ExprError("atom needs at least one argument")
        self.name = name
        self.args = args
        self.orders = orders
        self._hash = hash(("A", name, orders, args))
        self._key = None

    def _build_key(self):
        return (3, self.name, self.orders, tuple(a.sort_key() for a in self.args))

    def __eq__(self, other):
        return (
            isinstance(other, Atom)
            and self.name == other.name
            and self.orders == other.orders
            and self.args == other.args
        )


    __hash__ = Expr.__hash__

class App(Expr):
    """Unary elementary kernel: exp, ln, sin, cos, arctan."""

    __slots__ = ("fname", "arg")
    rank = 4
    KNOWN = ("exp", "ln", "sin", "cos", "arctan")

    def __init__(self, fname, arg):
        if fname not in self.KNOWN:
            raise ExprError(f"unknown function {fname!r}")
        self.fname = fname
        self.arg = arg
        self._hash = hash(("F", fname, arg))
        self._key = None

    def _build_key(self):
        return (4, self.fname, self.arg.sort_key())

    def __eq__(self, other):
        return isinstance(other, App) and self.fname == other.fname and self.arg == other.arg


    __hash__ = Expr.__hash__

class Pow(Expr):
    __slots__ = ("base", "exponent")
    rank = 5

    def __init__(self, base, exponent):
        self.base = base
        self.exponent = exponent
        self._hash = hash(("P", base, exponent))
        self._key = None

    def _build_key(self):
        return (5, self.base.sort_key(), self.exponent.sort_key())

    def __eq__(self, other):
        return isinstance(other, Pow) and self.base == other.base and self.exponent == other.exponent


    __hash__ = Expr.__hash__

class Mul(Expr):
    __slots__ = ("factors",)
    rank = 6

    def __init__(self, factors):
        self.factors = tuple(factors)
        self._hash = hash(("M", self.factors))
        self._key = None

    def _build_key(self):
        return (6, tuple(f.sort_key() for f in self.factors))

    def __eq__(self, other):
        return isinstance(other, Mul) and self.factors == other.factors


    __hash__ = Expr.__hash__

class Add(Expr):
    __slots__ = ("terms",)
    rank = 7

    def __init__(self, terms):
        self.terms = tuple(terms)
        self._hash = hash(("+", self.terms))
        self._key = None

    def _build_key(self):
        return (7, tuple(t.sort_key() for t in self.terms))

    def __eq__(self, other):
        return isinstance(other, Add) and self.terms == other.terms


    __hash__ = Expr.__hash__

def to_expr(x):
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, Fraction)):
        return Rat(x)
    raise ExprError(f"cannot interpret {x!r} as an expression")


# ---------------------------------------------------------------------------
# smart constructors

def add(*terms):
    flat = []
    const = Fraction(0)
    for t in terms:
        t = to_expr(t)
        if isinstance(t, Add):
            for s in t.terms:
                if isinstance(s, Rat):
                    const += s.value
                else:
                    flat.append(s)
        elif isinstance(t, Rat):
            const += t.value
        else:
            flat.append(t)
    flat.sort(key=lambda e: e.sort_key())
    if const:
        flat.insert(0, Rat(const))
    if not flat:
        return ZERO
    if len(flat) == 1:
        return flat[0]
    return Add(flat)


def mul(*factors):
    flat = []
    coeff = Fraction(1)
    for f in factors:
        f = to_expr(f)
        if isinstance(f, Mul):
            for g in f.factors:
                if isinstance(g, Rat):
                    coeff *= g.value
                else:
                    flat.append(g)
        elif isinstance(f, Rat):
            coeff *= f.value
        else:
            flat.append(f)
    if coeff == 0:
        return ZERO
    flat.sort(key=lambda e: e.sort_key())
    if coeff != 1:
        flat.insert(0, Rat(coeff))
    if not flat:
        return ONE
    if len(flat) == 1:
        return flat[0]
    return Mul(flat)


def exponent_linexp(e):
    """Validate and convert an exponent expression to int/Fraction/LinExp.
    Raises ExprError when the exponent is not rational-linear in
    parameters."""
    if isinstance(e, Rat):
        return make_exp(e.value)
    if isinstance(e, Sym):
        if e.name in ("t", "x"):
            raise ExprError(f"exponent may not contain the variable {e.name}")
        return LinExp(0, ((e.name, Fraction(1)),))
    if isinstance(e, Add):
        out = 0
        for t in e.terms:
            out = exp_add(out, exponent_linexp(t))
        return out
    if isinstance(e, Mul):
        out = 1
        for f in e.factors:
            out = exp_mul(out, exponent_linexp(f))
        return out
    if isinstance(e, Pow):
        b = exponent_linexp(e.base)
        x = exponent_linexp(e.exponent)
        if isinstance(b, LinExp) or isinstance(x, LinExp) or Fraction(x).denominator != 1:
            raise ExprError("exponent is not rational-linear in parameters")
        return make_exp(Fraction(b) ** int(x))
    raise ExprError("exponent is not rational-linear in parameters")


def linexp_to_expr(le):
    if not isinstance(le, LinExp):
        return Rat(le)
    terms = [Rat(le.const)] if le.const else []
    for name, c in le.terms:
        terms.append(mul(Rat(c), Sym(name)))
    return add(*terms)


def pow_(base, exponent):
    base = to_expr(base)
    exponent = to_expr(exponent)
    le = exponent_linexp(exponent)  # validates
    if isinstance(base, App) and base.fname == "exp":
        return app("exp", mul(base.arg, exponent))
    if le == 1:
        return base
    if le == 0:
        if isinstance(base, Rat) and base.value == 0:
            raise ExprError("0^0 is undefined")
        return ONE
    if isinstance(base, Rat):
        if base.value == 0:
            if isinstance(le, LinExp) or le < 0:
                raise ExprError("zero base with nonpositive or symbolic exponent")
            return ZERO
        if base.value == 1:
            return ONE
        if not isinstance(le, LinExp) and Fraction(le).denominator == 1:
            return Rat(base.value ** int(le))
    return Pow(base, exponent)


def app(fname, arg):
    arg = to_expr(arg)
    if fname == "sqrt":
        return pow_(arg, Rat(Fraction(1, 2)))
    if fname == "ln" and isinstance(arg, App) and arg.fname == "exp":
        return arg.arg
    if fname == "exp" and isinstance(arg, Rat) and arg.value == 0:
        return ONE
    if fname == "ln" and isinstance(arg, Rat) and arg.value == 1:
        return ZERO
    return App(fname, arg)


def atom(name, args, orders=None):
    return Atom(name, args, orders)


ZERO = Rat(0)
ONE = Rat(1)
MINUS_ONE = Rat(-1)
T = Sym("t")
X = Sym("x")
U = Jet(0, 0)
U_T = Jet(1, 0)
U_X = Jet(0, 1)


def jet_name(a, b):
    if a == 0 and b == 0:
        return "u"
    if a == 1 and b == 0:
        return "u_t"
    if a == 0:
        return "u_x" if b == 1 else f"u_{b}x"
    return "u_tx" if b == 1 else f"u_t{b}x"


# ---------------------------------------------------------------------------
# printing (inverse of the parser grammar)

_PREC_ADD = 10
_PREC_MUL = 20
_PREC_POW = 30
_PREC_ATOMIC = 100


def _prec(e):
    if isinstance(e, Add):
        return _PREC_ADD
    if isinstance(e, Mul):
        return _PREC_MUL
    if isinstance(e, Pow):
        return _PREC_POW
    if isinstance(e, Rat):
        if e.value < 0:
            return _PREC_ADD
        if e.value.denominator != 1:
            return _PREC_MUL
    return _PREC_ATOMIC


def _paren(e, parent_prec, strict=False):
    s = to_string(e)
    p = _prec(e)
    if p < parent_prec or (strict and p == parent_prec):
        return "(" + s + ")"
    return s


def to_string(e):
    if isinstance(e, Rat):
        return str(e.value)
    if isinstance(e, Sym):
        return e.name
    if isinstance(e, Jet):
        return jet_name(e.a, e.b)
    if isinstance(e, Atom):
        head = e.name + "(" + ", ".join(to_string(a) for a in e.args) + ")"
        if all(k == 0 for k in e.orders):
            return head
        simple = all(isinstance(a, (Sym, Jet)) for a in e.args)
        if simple:
            out = head
            for a, k in zip(e.args, e.orders):
                if k > 0:
                    out = f"diff({out}, {to_string(a)}, {k})" if k > 1 else f"diff({out}, {to_string(a)})"
            return out
        tags = ", ".join(str(k) for k in e.orders)
        return f"pd({e.name}, {tags})(" + ", ".join(to_string(a) for a in e.args) + ")"
    if isinstance(e, App):
        return f"{e.fname}({to_string(e.arg)})"
    if isinstance(e, Pow):
        bs = _paren(e.base, _PREC_POW, strict=True)
        ex = e.exponent
        needs = not (
            isinstance(ex, (Sym, Jet))
            or (isinstance(ex, Rat) and ex.value >= 0 and ex.value.denominator == 1)
            or isinstance(ex, (App, Atom))
        )
        es = "(" + to_string(ex) + ")" if needs else to_string(ex)
        return f"{bs}^{es}"
    if isinstance(e, Mul):
        factors = list(e.factors)
        prefix = ""
        if isinstance(factors[0], Rat):
            c = factors[0].value
            if c == -1 and len(factors) > 1:
                prefix = "-"
                factors = factors[1:]
            elif c < 0:
                prefix = "-"
                factors = [Rat(-c)] + factors[1:]
        bits = [_paren(f, _PREC_MUL) for f in factors]
        return prefix + "*".join(bits)
    if isinstance(e, Add):
        out = to_string(e.terms[0])
        for t in e.terms[1:]:
            neg = _negated(t)
            if neg is not None:
                out += " - " + _paren(neg, _PREC_ADD, strict=True)
            else:
                out += " + " + _paren(t, _PREC_ADD, strict=True)
        return out
    raise ExprError(f"cannot print {e!r}")


def _negated(t):
    """If t is a term with a negative rational coefficient, return its
    negation, else None."""
    if isinstance(t, Rat) and t.value < 0:
        return Rat(-t.value)
    if isinstance(t, Mul) and isinstance(t.factors[0], Rat) and t.factors[0].value < 0:
        return mul(Rat(-t.factors[0].value), *t.factors[1:])
    return None


# ---------------------------------------------------------------------------
# traversal helpers

def children(e):
    if isinstance(e, Add):
        return e.terms
    if isinstance(e, Mul):
        return e.factors
    if isinstance(e, Pow):
        return (e.base, e.exponent)
    if isinstance(e, App):
        return (e.arg,)
    if isinstance(e, Atom):
        return e.args
    return ()


def walk(e):
    yield e
    for c in children(e):
        yield from walk(c)


def free_symbols(e):
    return {n.name for n in walk(e) if isinstance(n, Sym)}


def jets_in(e):
    return {(n.a, n.b) for n in walk(e) if isinstance(n, Jet)}


def atoms_in(e):
    return {n for n in walk(e) if isinstance(n, Atom)}


def contains_jet_derivatives(e):
    return any(isinstance(n, Jet) and (n.a + n.b) >= 1 for n in walk(e))
