"""Canonical forms and exact calculus on expression trees.

The canonical form is a multivariate rational normal form over Q in
which transcendental kernels (exp/ln/sin/cos/arctan applications, opaque
function atoms, powers with non-integer exponents) are independent
generators.  `normalize` maps an Expr to the canonical Expr rebuilt from
that form; an expression is syntactically-rationally zero iff its
canonical numerator is the empty polynomial.

Power collision t^a*t^b -> t^(a+b) for non-integer exponents is licensed
only by a positivity assumption on the base; (e^g)^h -> e^(g*h) and
ln(e^g) -> g hold unconditionally; exp kernels multiply by adding their
arguments.  No other transcendental identities are applied, which is why
`is_zero` backs the syntactic test with seeded numeric sampling and a
three-valued verdict.
"""

import enum
import hashlib
import math
import random
from fractions import Fraction

from . import polycore as pc
from .assumptions import EMPTY, AssumptionSet, sample_interval
from .exprs import (
    Add,
    App,
    Atom,
    Expr,
    ExprError,
    Jet,
    Mul,
    Pow,
    Rat,
    Sym,
    ZERO,
    add,
    app,
    atom,
    exponent_linexp,
    jet_name,
    linexp_to_expr,
    mul,
    pow_,
    to_expr,
)
from .linexp import (
    LinExp,
    exp_const_frac_split,
    exp_eval,
    exp_is_number,
    exp_mul,
    exp_scale,
    exp_subs_params,
)


class Zeroness(enum.Enum):
    ZERO = "ZERO"
    PROBABLY_ZERO = "PROBABLY_ZERO"
    NONZERO = "NONZERO"


class EvalError(ValueError):
    pass


class SubstitutionError(ValueError):
    pass


# ---------------------------------------------------------------------------
# positivity

def _gen_positive(g, ctx):
    kind = g.data[0]
    if kind == pc.K_SYM:
        return ctx.is_positive(g.data[1])
    if kind == pc.K_JET:
        return g.data[1] == 0 and g.data[2] == 0 and ctx.is_positive("u")
    if kind == pc.K_EXP or kind == pc.K_POWPOS:
        return True
    if kind == pc.K_POLY:
        return poly_structurally_positive(pc.p_thaw(g.data[1]), ctx)
    return False


def _mono_nonneg(m, ctx):
    for g, e in m:
        if _gen_positive(g, ctx):
            continue
        if exp_is_number(e) and Fraction(e).denominator == 1 and int(e) % 2 == 0:
            continue
        return False
    return True


def _mono_strictly_positive(m, ctx):
    return all(_gen_positive(g, ctx) for g, _ in m)


def poly_structurally_positive(p, ctx):
    """True when every monomial is manifestly nonnegative with a positive
    coefficient and at least one is strictly positive."""
    if not p:
        return False
    strict = False
    for m, c in p.items():
        if c <= 0 or not _mono_nonneg(m, ctx):
            return False
        if _mono_strictly_positive(m, ctx):
            strict = True
    return strict


def poly_structurally_nonneg(p, ctx):
    return bool(p) and all(c > 0 and _mono_nonneg(m, ctx) for m, c in p.items())


# ---------------------------------------------------------------------------
# Expr -> rnf

def _exp_factor_split(slotted):
    """Split a rational-content term into exp kernels; slotted is a list
    of (content Fraction, direction mono)."""
    factors = pc.p_one()
    for c, m in slotted:
        if c == 0:
            continue
        factors = pc.p_mul(factors, {((pc.g_exp(m), c),): Fraction(1)})
    return factors


def _exp_of_rnf(arg, ctx):
    """exp(value of arg) as a polynomial of exp kernels."""
    num, den = arg
    if pc.p_is_zero(num):
        return pc.p_one()
    terms = []
    if pc.p_is_one(den):
        for m, c in num.items():
            terms.append((c, m))
    elif len(den) == 1:
        (md, cd), = den.items()
        mi, carries = pc.mono_inv(md)
        extra = ()
        if carries:
            extra = tuple((pc.g_poly(base_fp), -n) for base_fp, n in carries)
        for m, c in num.items():
            mm, cr = pc.mono_mul(m, mi)
            if cr:
                for base_fp, n in cr:
                    # fold the carry back as a wrapped-poly factor
                    mm, _ = pc.mono_mul(mm, ((pc.g_poly(base_fp), n),))
            if extra:
                mm, _ = pc.mono_mul(mm, extra)
            terms.append((c / cd, mm))
    else:
        dgen = pc.g_poly(pc.p_freeze(den))
        for m, c in num.items():
            mm, _ = pc.mono_mul(m, ((dgen, -1),))
            terms.append((c, mm))
    return _exp_factor_split(terms)


def _pow_rational_coeff(c, le, ctx):
    """c^le for a rational c as an rnf; c may be negative (opaque)."""
    if c == 1:
        return (pc.p_one(), pc.p_one())
    if c > 0:
        n, rem = exp_const_frac_split(le)
        out = (pc.p_const(Fraction(c) ** n), pc.p_one()) if n >= 0 else (
            pc.p_one(),
            pc.p_const(Fraction(c) ** (-n)),
        )
        if rem == 0:
            return out
        if exp_is_number(rem):
            exact = _exact_frac_root(Fraction(c), Fraction(rem))
            if exact is not None:
                return (pc.p_mul(out[0], pc.p_const(exact)), out[1])
        g = pc.g_powpos(pc.p_freeze(pc.p_const(c)))
        return (pc.p_mul(out[0], {((g, rem),): Fraction(1)}), out[1])
    base = pc.r_freeze((pc.p_const(c), pc.p_one()))
    g = pc.g_powop(base, le)
    return ({((g, 1),): Fraction(1)}, pc.p_one())


def _exact_frac_root(c, e):
    """c**e as an exact Fraction when it is one (e in (0,1))."""
    q = e.denominator
    p = e.numerator

    def iroot(n, k):
        if n == 0:
            return 0
        r = round(n ** (1.0 / k))
        for cand in (r - 1, r, r + 1):
            if cand >= 0 and cand**k == n:
                return cand
        return None

    rn = iroot(c.numerator, q)
    rd = iroot(c.denominator, q)
    if rn is None or rd is None:
        return None
    return Fraction(rn, rd) ** p


def _pow_mono(m, c, le, ctx):
    """(c * m)^le as an rnf; le is non-integer (Fraction or LinExp)."""
    num, den = _pow_rational_coeff(c, le, ctx)
    for g, e in m:
        try:
            ne = exp_mul(e, le)
        except ValueError:
            raise ExprError("exponent is not rational-linear in parameters")
        kind = g.data[0]
        if kind == pc.K_EXP:
            # e^(slot*M) to the le: parameters of le join the direction
            direction = g.data[1]
            slot = Fraction(e)
            if isinstance(le, LinExp):
                pieces = []
                if le.const:
                    pieces.append((slot * le.const, direction))
                for name, coeff in le.terms:
                    dm, _ = pc.mono_mul(direction, ((pc.g_sym(name), 1),))
                    pieces.append((slot * coeff, dm))
                num = pc.p_mul(num, _exp_factor_split(pieces))
            else:
                num = pc.p_mul(num, _exp_factor_split([(slot * Fraction(le), direction)]))
            continue
        if kind == pc.K_POWPOS:
            n, rem = exp_const_frac_split(ne)
            basep = pc.p_thaw(g.data[1])
            if n > 0:
                num = pc.p_mul(num, pc.p_pow_int(basep, n))
            elif n < 0:
                den = pc.p_mul(den, pc.p_pow_int(basep, -n))
            if rem != 0:
                num = pc.p_mul(num, {((g, rem),): Fraction(1)})
            continue
        if kind == pc.K_POWOP:
            total = exp_scale(g.data[2], e)
            try:
                full = exp_mul(total, le)
            except ValueError:
                raise ExprError("exponent is not rational-linear in parameters")
            if exp_is_number(full) and Fraction(full).denominator == 1:
                r = pc.r_pow_int(pc.r_thaw(g.data[1]), int(full))
                num = pc.p_mul(num, r[0])
                den = pc.p_mul(den, r[1])
            else:
                ng = pc.g_powop(g.data[1], full)
                num = pc.p_mul(num, {((ng, 1),): Fraction(1)})
            continue
        if exp_is_number(ne) and Fraction(ne).denominator == 1:
            ne = int(ne)
            if ne > 0:
                num = pc.p_mul(num, pc.p_gen(g, ne))
            elif ne < 0:
                den = pc.p_mul(den, pc.p_gen(g, -ne))
            continue
        if _gen_positive(g, ctx):
            num = pc.p_mul(num, {((g, ne),): Fraction(1)})
            continue
        base = pc.r_freeze((pc.p_gen(g), pc.p_one()))
        num = pc.p_mul(num, {((pc.g_powop(base, ne), 1),): Fraction(1)})
    return pc.r_canon((num, den))


def _pow_poly(p, le, ctx):
    """p^le for non-integer le."""
    if pc.p_is_zero(p):
        if isinstance(le, LinExp) or le <= 0:
            raise ExprError("zero base with nonpositive or symbolic exponent")
        return (pc.p_zero(), pc.p_one())
    if len(p) == 1:
        (m, c), = p.items()
        return _pow_mono(m, c, le, ctx)
    if poly_structurally_positive(p, ctx):
        n, rem = exp_const_frac_split(le)
        num, den = pc.p_one(), pc.p_one()
        if n > 0:
            num = pc.p_pow_int(p, n)
        elif n < 0:
            den = pc.p_pow_int(p, -n)
        if rem != 0:
            g = pc.g_powpos(pc.p_freeze(p))
            num = pc.p_mul(num, {((g, rem),): Fraction(1)})
        return pc.r_canon((num, den))
    base = pc.r_freeze((p, pc.p_one()))
    return ({((pc.g_powop(base, le), 1),): Fraction(1)}, pc.p_one())


def r_pow(r, le, ctx):
    if exp_is_number(le) and Fraction(le).denominator == 1:
        return pc.r_pow_int(r, int(le))
    num, den = r
    rn = _pow_poly(num, le, ctx)
    if pc.p_is_one(den):
        return rn
    rd = _pow_poly(den, le, ctx)
    return pc.r_div(rn, rd)


def to_rnf(e, ctx=EMPTY):
    if isinstance(e, Rat):
        return (pc.p_const(e.value), pc.p_one())
    if isinstance(e, Sym):
        return (pc.p_gen(pc.g_sym(e.name)), pc.p_one())
    if isinstance(e, Jet):
        return (pc.p_gen(pc.g_jet(e.a, e.b)), pc.p_one())
    if isinstance(e, Atom):
        args = tuple(pc.r_freeze(pc.r_canon(to_rnf(a, ctx))) for a in e.args)
        return (pc.p_gen(pc.g_atom(e.name, e.orders, args)), pc.p_one())
    if isinstance(e, App):
        arg = pc.r_canon(to_rnf(e.arg, ctx))
        if e.fname == "exp":
            return (_exp_of_rnf(arg, ctx), pc.p_one())
        if e.fname == "ln":
            # ln(e^g * rest) could be split; only the constructor-level
            # ln(e^g) rewrite is licensed, so keep the kernel opaque.
            pass
        return (pc.p_gen(pc.g_app(e.fname, pc.r_freeze(arg))), pc.p_one())
    if isinstance(e, Pow):
        le = exponent_linexp(e.exponent)
        return r_pow(pc.r_canon(to_rnf(e.base, ctx)), le, ctx)
    if isinstance(e, Mul):
        out = (pc.p_one(), pc.p_one())
        for f in e.factors:
            out = pc.r_mul(out, to_rnf(f, ctx))
        return out
    if isinstance(e, Add):
        out = (pc.p_zero(), pc.p_one())
        for t in e.terms:
            out = pc.r_add(out, to_rnf(t, ctx))
        return out
    raise ExprError(f"cannot normalize {e!r}")


# ---------------------------------------------------------------------------
# rnf -> Expr

def _mono_expr(m):
    return mul(*[_gen_pow_expr(g, e) for g, e in m]) if m else Rat(1)


def _gen_pow_expr(g, e):
    kind = g.data[0]
    if kind == pc.K_EXP:
        direction = _mono_expr(g.data[1])
        return app("exp", mul(Rat(e), direction))
    if kind == pc.K_POWOP:
        base = from_rnf(pc.r_thaw(g.data[1]))
        return Pow(base, linexp_to_expr(exp_scale(g.data[2], e)))
    base = _gen_base_expr(g)
    if e == 1:
        return base
    return pow_(base, linexp_to_expr(e))


def _gen_base_expr(g):
    kind = g.data[0]
    data = g.data
    if kind == pc.K_SYM:
        return Sym(data[1])
    if kind == pc.K_JET:
        return Jet(data[1], data[2])
    if kind == pc.K_ATOM:
        return Atom(data[1], tuple(from_rnf(pc.r_thaw(fa)) for fa in data[3]), data[2])
    if kind == pc.K_APP:
        return App(data[1], from_rnf(pc.r_thaw(data[2])))
    if kind == pc.K_POWPOS:
        return _poly_expr(pc.p_thaw(data[1]))
    if kind == pc.K_POLY:
        return _poly_expr(pc.p_thaw(data[1]))
    raise ExprError(f"unknown generator kind {kind}")


def _poly_expr(p):
    if not p:
        return ZERO
    terms = []
    for m in sorted(p, key=pc.mono_key):
        c = p[m]
        terms.append(mul(Rat(c), _mono_expr(m)))
    return add(*terms)


def from_rnf(r):
    num, den = r
    ne = _poly_expr(num)
    if pc.p_is_one(den):
        return ne
    de = _poly_expr(den)
    return mul(ne, pow_(de, Rat(-1)))


def normalize(e, assumptions=EMPTY):
    return from_rnf(pc.r_canon(to_rnf(to_expr(e), assumptions)))


# ---------------------------------------------------------------------------
# differentiation

def _var_gen(v):
    if isinstance(v, str):
        if v == "t" or v == "x":
            return pc.g_sym(v)
        if v == "u":
            return pc.g_jet(0, 0)
        return pc.g_sym(v)
    v = to_expr(v)
    if isinstance(v, Sym):
        return pc.g_sym(v.name)
    if isinstance(v, Jet):
        return pc.g_jet(v.a, v.b)
    raise ExprError(f"cannot differentiate with respect to {v!r}")


def diff_rnf(r, v):
    return pc.r_diff(r, _var_gen(v))


def differentiate(e, v, assumptions=EMPTY, order=1):
    r = to_rnf(to_expr(e), assumptions)
    g = _var_gen(v)
    for _ in range(order):
        r = pc.r_diff(r, g)
    return from_rnf(pc.r_canon(r))


# ---------------------------------------------------------------------------
# substitution

def _formal_to_expr(f):
    if isinstance(f, str):
        if f == "u":
            return Jet(0, 0)
        if f in _JET_NAMES:
            return Jet(*_JET_NAMES[f])
        return Sym(f)
    f = to_expr(f)
    if not isinstance(f, (Sym, Jet)):
        raise SubstitutionError(f"template formal must be a variable, got {f!r}")
    return f


class Bindings:
    """Resolved substitution table.

    sym:   name -> Expr
    jet:   (a, b) -> Expr
    fun:   atom name -> (formals tuple of Sym/Jet, template Expr)
    exact: Atom instance -> Expr
    """

    def __init__(self, raw):
        self.sym = {}
        self.jet = {}
        self.fun = {}
        self.exact = {}
        for key, val in raw.items():
            if isinstance(key, Atom):
                self.exact[key] = to_expr(val)
                continue
            if isinstance(key, Jet):
                self.jet[(key.a, key.b)] = to_expr(val)
                continue
            if isinstance(key, Sym):
                key = key.name
            if not isinstance(key, str):
                raise SubstitutionError(f"bad binding key {key!r}")
            if key == "u":
                self.jet[(0, 0)] = to_expr(val)
            elif key in _JET_NAMES:
                self.jet[_JET_NAMES[key]] = to_expr(val)
            elif isinstance(val, tuple) and len(val) == 2 and isinstance(val[1], Expr):
                formals = tuple(_formal_to_expr(f) for f in val[0])
                self.fun[key] = (formals, to_expr(val[1]))
            elif isinstance(val, tuple):
                raise SubstitutionError(f"bad template binding for {key!r}")
            else:
                self.sym[key] = to_expr(val)

    def check_acyclic(self):
        from .exprs import free_symbols

        deps = {}
        for k, v in self.sym.items():
            deps[k] = free_symbols(v)
        for k, (formals, tpl) in self.fun.items():
            deps[k] = free_symbols(tpl) - {f.name for f in formals if isinstance(f, Sym)}
        seen = {}

        def visit(n, stack):
            if n in stack:
                raise SubstitutionError(f"cyclic binding through {n!r}")
            if seen.get(n):
                return
            stack.add(n)
            for m in deps.get(n, ()):
                if m in deps:
                    visit(m, stack)
            stack.discard(n)
            seen[n] = True

        for n in deps:
            visit(n, set())


_JET_NAMES = {}
for _a in (0, 1):
    for _b in range(0, 11):
        if _a == 1 and _b > 5:
            continue
        _JET_NAMES[jet_name(_a, _b)] = (_a, _b)


def _subs_poly(p, b, ctx):
    out = (pc.p_zero(), pc.p_one())
    for m, c in p.items():
        term = (pc.p_const(c), pc.p_one())
        for g, e in m:
            img = _subs_gen(g, b, ctx)
            term = pc.r_mul(term, r_pow(img, _subs_exp(e, b), ctx))
        out = pc.r_add(out, term)
    return out


def _subs_exp(e, b):
    """Apply parameter bindings inside an exponent; images must be
    rational constants or parameter renames."""
    if not isinstance(e, LinExp):
        return e
    rat_map = {}
    for name, _ in e.terms:
        if name in b.sym:
            img = b.sym[name]
            if isinstance(img, Rat):
                rat_map[name] = img.value
            elif isinstance(img, Sym) and img.name not in ("t", "x"):
                rat_map[name] = img.name
            else:
                raise SubstitutionError(
                    f"parameter {name!r} in an exponent may only be bound to a rational or parameter"
                )
    return exp_subs_params(e, rat_map)


def _subs_rnf(r, b, ctx):
    num = _subs_poly(r[0], b, ctx)
    den = _subs_poly(r[1], b, ctx)
    return pc.r_div(num, den)


def _subs_gen(g, b, ctx):
    data = g.data
    kind = data[0]
    if kind == pc.K_SYM:
        img = b.sym.get(data[1])
        if img is not None:
            return to_rnf(img, ctx)
        return (pc.p_gen(g), pc.p_one())
    if kind == pc.K_JET:
        img = b.jet.get((data[1], data[2]))
        if img is not None:
            return to_rnf(img, ctx)
        return (pc.p_gen(g), pc.p_one())
    if kind == pc.K_ATOM:
        name, orders, args = data[1], data[2], data[3]
        atom_expr = Atom(name, tuple(from_rnf(pc.r_thaw(fa)) for fa in args), orders)
        for key, val in b.exact.items():
            if key == atom_expr:
                return to_rnf(val, ctx)
        template = b.fun.get(name)
        if template is None and name in b.sym:
            formals = tuple(from_rnf(pc.r_thaw(fa)) for fa in args)
            if not all(isinstance(f, (Sym, Jet)) for f in formals):
                raise SubstitutionError(
                    f"binding for {name!r} needs explicit formals (composite arguments)"
                )
            template = (formals, b.sym[name])
        if template is not None:
            formals, tpl = template
            if len(formals) != len(args):
                raise SubstitutionError(f"arity mismatch binding {name!r}")
            d = to_rnf(tpl, ctx)
            for f, k in zip(formals, orders):
                gf = _var_gen(f)
                for _ in range(k):
                    d = pc.r_diff(d, gf)
            inner = {}
            for f, fa in zip(formals, args):
                inner[f if isinstance(f, Jet) else f.name] = from_rnf(
                    _subs_rnf(pc.r_thaw(fa), b, ctx)
                )
            return _subs_rnf(d, Bindings(inner), ctx)
        new_args = tuple(
            pc.r_freeze(pc.r_canon(_subs_rnf(pc.r_thaw(fa), b, ctx))) for fa in args
        )
        return (pc.p_gen(pc.g_atom(name, orders, new_args)), pc.p_one())
    if kind == pc.K_APP:
        arg = _subs_rnf(pc.r_thaw(data[2]), b, ctx)
        return to_rnf(app(data[1], from_rnf(arg)), ctx)
    if kind == pc.K_EXP:
        # gen value at slot 1 is exp(direction value); the caller raises
        # the image to the slot content afterwards
        term = (pc.p_one(), pc.p_one())
        for gg, ee in data[1]:
            term = pc.r_mul(term, r_pow(_subs_gen(gg, b, ctx), _subs_exp(ee, b), ctx))
        return to_rnf(app("exp", from_rnf(term)), ctx)
    if kind == pc.K_POWPOS:
        # gen value at slot 1 is the base itself
        return _subs_poly(pc.p_thaw(data[1]), b, ctx)
    if kind == pc.K_POWOP:
        base = _subs_rnf(pc.r_thaw(data[1]), b, ctx)
        return r_pow(base, _subs_exp(data[2], b), ctx)
    if kind == pc.K_POLY:
        return _subs_poly(pc.p_thaw(data[1]), b, ctx)
    raise ExprError(f"unknown generator kind {kind}")


def substitute(e, bindings, assumptions=EMPTY):
    """Simultaneous substitution followed by normalization.  Bindings map
    symbols/jets to expressions and atom names to expressions or
    (formals, template) pairs; derivative orders of an atom rewrite to
    derivatives of the template."""
    b = bindings if isinstance(bindings, Bindings) else Bindings(bindings)
    b.check_acyclic()
    r = to_rnf(to_expr(e), assumptions)
    return from_rnf(pc.r_canon(_subs_rnf(r, b, assumptions)))


# ---------------------------------------------------------------------------
# numeric evaluation

def eval_numeric(e, assignment):
    """IEEE double evaluation.  Symbols and jets are looked up by name
    ('t', 'rho', 'u_2x', ...); atoms by name, where the value may be a
    float (order 0 only), a dict {order or orders-tuple: float}, or a
    callable f(arg_values_tuple, orders_tuple) -> float."""
    e = to_expr(e)
    if isinstance(e, Rat):
        return float(e.value)
    if isinstance(e, Sym):
        if e.name not in assignment:
            raise EvalError(f"unassigned symbol {e.name!r}")
        return float(assignment[e.name])
    if isinstance(e, Jet):
        name = jet_name(e.a, e.b)
        if name not in assignment:
            raise EvalError(f"unassigned jet coordinate {name!r}")
        return float(assignment[name])
    if isinstance(e, Atom):
        argv = tuple(eval_numeric(a, assignment) for a in e.args)
        if e.name not in assignment:
            raise EvalError(f"unassigned function atom {e.name!r}")
        val = assignment[e.name]
        if callable(val):
            return float(val(argv, e.orders))
        if isinstance(val, dict):
            key = e.orders if e.orders in val else (e.orders[0] if len(e.orders) == 1 else e.orders)
            if key not in val:
                raise EvalError(f"no value for {e.name!r} at orders {e.orders}")
            return float(val[key])
        if any(e.orders):
            raise EvalError(f"plain value for {e.name!r} cannot cover derivative orders")
        return float(val)
    if isinstance(e, App):
        v = eval_numeric(e.arg, assignment)
        if e.fname == "exp":
            return math.exp(v)
        if e.fname == "ln":
            if v <= 0:
                raise EvalError(f"ln of nonpositive value {v}")
            return math.log(v)
        if e.fname == "sin":
            return math.sin(v)
        if e.fname == "cos":
            return math.cos(v)
        if e.fname == "arctan":
            return math.atan(v)
    if isinstance(e, Pow):
        b = eval_numeric(e.base, assignment)
        le = exponent_linexp(e.exponent)
        x = exp_eval(le, assignment)
        if b < 0 and x != int(x):
            raise EvalError(f"negative base {b} with non-integer exponent {x}")
        if b == 0 and x < 0:
            raise EvalError("zero to a negative power")
        return b**x
    if isinstance(e, Mul):
        v = 1.0
        for f in e.factors:
            v *= eval_numeric(f, assignment)
        return v
    if isinstance(e, Add):
        return math.fsum(eval_numeric(t, assignment) for t in e.terms)
    raise EvalError(f"cannot evaluate {e!r}")


def _stable_seed(*parts):
    h = hashlib.blake2b(":".join(str(p) for p in parts).encode(), digest_size=8)
    return int.from_bytes(h.digest(), "big")


class _AtomSampler:
    """Deterministic smooth pseudo-random function per (name, orders)."""

    def __init__(self, seed):
        self.seed = seed
        self.cache = {}

    def __call__(self, name):
        def fn(argv, orders, _name=name):
            key = (_name, orders)
            coeffs = self.cache.get(key)
            if coeffs is None:
                rng = random.Random(_stable_seed(self.seed, _name, orders))
                coeffs = [rng.uniform(-2, 2) for _ in range(4)]
                coeffs[2] = rng.uniform(0.3, 1.7)
                self.cache[key] = coeffs
            s = sum((i + 1) * v for i, v in enumerate(argv))
            c0, c1, c2, c3 = coeffs
            return c0 + c1 * math.sin(c2 * s + c3)

        return fn


def _sample_assignment(e, ctx, rng, sampler):
    from .exprs import walk

    assignment = {}
    for node in walk(e):
        if isinstance(node, Sym) and node.name not in assignment:
            lo, hi = sample_interval(node.name, ctx)
            v = rng.uniform(lo, hi)
            if ctx.is_nonzero(node.name) and abs(v) < 0.05:
                v = 0.35 if v >= 0 else -0.35
            assignment[node.name] = v
        elif isinstance(node, Jet):
            name = jet_name(node.a, node.b)
            if name not in assignment:
                if node.a == 0 and node.b == 0:
                    lo, hi = sample_interval("u", ctx)
                    assignment[name] = rng.uniform(lo, hi)
                else:
                    assignment[name] = rng.uniform(-1.5, 1.5)
        elif isinstance(node, Atom) and node.name not in assignment:
            assignment[node.name] = sampler(node.name)
    return assignment


def is_zero(e, assumptions=EMPTY, seed=0, samples=8, tol=1e-9):
    """Three-valued zero test: syntactic zero, numerically-zero at the
    sampled points (PROBABLY_ZERO), or NONZERO."""
    e = to_expr(e)
    r = pc.r_canon(to_rnf(e, assumptions))
    if pc.r_is_zero(r):
        return Zeroness.ZERO
    num_terms = [
        mul(Rat(c), _mono_expr(m)) for m, c in sorted(r[0].items(), key=lambda kv: pc.mono_key(kv[0]))
    ]
    sampler = _AtomSampler(seed)
    done = 0
    attempts = 0
    probe = add(*num_terms)
    while done < samples:
        attempts += 1
        if attempts > samples * 8:
            return Zeroness.NONZERO
        rng = random.Random(_stable_seed(seed, attempts))
        assignment = _sample_assignment(probe, assumptions, rng, sampler)
        try:
            vals = [eval_numeric(term, assignment) for term in num_terms]
        except EvalError:
            continue
        scale = sum(abs(v) for v in vals)
        if scale == 0.0:
            continue
        if abs(math.fsum(vals)) > tol * max(1.0, scale):
            return Zeroness.NONZERO
        done += 1
    return Zeroness.PROBABLY_ZERO


def equivalent(e1, e2, assumptions=EMPTY, seed=0):
    return is_zero(add(to_expr(e1), mul(Rat(-1), to_expr(e2))), assumptions, seed)
