"""Jet coordinates of u(t,x), total derivatives, and elimination of
t-derivatives on the solution manifold of a fifth-order evolution
equation u_t + alpha(t) f(u) u_x + beta(t) u_xxx + sigma(t) u_xxxxx = 0.

Mixed coordinates u_tx..u_t5x are materialized by the total derivative
operators and removed by an explicit `on_shell_reduce` pass, never
eagerly.  x-orders are capped at 10, which is exactly what the fifth
x-derivative of the substituted u_t requires.
"""

from fractions import Fraction

from . import polycore as pc
from .assumptions import EMPTY, AssumptionSet
from .calculus import (
    Zeroness,
    diff_rnf,
    from_rnf,
    is_zero,
    normalize,
    substitute,
    to_rnf,
)
from .exprs import (
    Atom,
    Expr,
    ExprError,
    Jet,
    MAX_X_ORDER,
    Rat,
    Sym,
    U,
    U_T,
    U_X,
    add,
    atom,
    mul,
    to_expr,
)

FULL = "full"
NONLINEAR_GAUGED = "nonlinear-gauged"
LINEAR_B = "linear-b"
LINEAR_GAUGED = "linear-gauged"

CLASS_TAGS = (FULL, NONLINEAR_GAUGED, LINEAR_B, LINEAR_GAUGED)


class JetOrderError(ExprError):
    pass


class PdeDefinitionError(ValueError):
    pass


def _jets_in_rnf(r, acc):
    for p in r:
        for m in p:
            for g, _ in m:
                _jets_in_gen(g, acc)


def _jets_in_gen(g, acc):
    kind = g.data[0]
    if kind == pc.K_JET:
        acc.add((g.data[1], g.data[2]))
    elif kind == pc.K_ATOM:
        for fa in g.data[3]:
            _jets_in_rnf(fa, acc)
    elif kind == pc.K_APP:
        _jets_in_rnf(g.data[2], acc)
    elif kind == pc.K_EXP:
        for gg, _ in g.data[1]:
            _jets_in_gen(gg, acc)
    elif kind == pc.K_POWPOS or kind == pc.K_POLY:
        for m in g.data[1]:
            if isinstance(m, tuple) and len(m) == 2 and isinstance(m[0], tuple):
                for gg, _ in m[0]:
                    _jets_in_gen(gg, acc)
    elif kind == pc.K_POWOP:
        _jets_in_rnf(g.data[1], acc)


def jets_of(e, assumptions=EMPTY):
    """Jet coordinates appearing anywhere in e (including inside atom
    arguments and kernels)."""
    acc = set()
    _jets_in_rnf(to_rnf(to_expr(e), assumptions), acc)
    return acc


def total_derivative(e, direction, assumptions=EMPTY):
    """Total derivative D_t or D_x on the jet space."""
    if direction not in ("t", "x"):
        raise ExprError(f"direction must be 't' or 'x', got {direction!r}")
    e = to_expr(e)
    r = to_rnf(e, assumptions)
    jets = set()
    _jets_in_rnf(r, jets)
    out = diff_rnf(r, direction)
    for a, b in sorted(jets):
        if direction == "t":
            if a == 1:
                raise JetOrderError(
                    "total t-derivative of a mixed coordinate; reduce on shell first"
                )
            na, nb = 1, b
        else:
            if b + 1 > MAX_X_ORDER:
                raise JetOrderError(f"x-order above {MAX_X_ORDER}")
            na, nb = a, b + 1
        partial = diff_rnf(r, Jet(a, b))
        if pc.r_is_zero(partial):
            continue
        out = pc.r_add(out, pc.r_mul(partial, to_rnf(Jet(na, nb), assumptions)))
    return from_rnf(pc.r_canon(out))


class PdeInstance:
    """One equation of the class: arbitrary elements f(u), alpha(t),
    beta(t), sigma(t), the shift b for the linear classes, a class tag,
    and the domain assumptions under which its coefficients live."""

    def __init__(self, tag, f=None, alpha=None, beta=None, sigma=None, b=None,
                 assumptions=EMPTY, check=True):
        if tag not in CLASS_TAGS:
            raise PdeDefinitionError(f"unknown class tag {tag!r}")
        self.tag = tag
        self.assumptions = assumptions
        one = Rat(1)
        if tag == LINEAR_GAUGED:
            b = Rat(0) if b is None else to_expr(b)
            f = U
            alpha = one if alpha is None else to_expr(alpha)
        elif tag == LINEAR_B:
            b = Rat(0) if b is None else to_expr(b)
            f = add(U, b)
            alpha = atom("alpha", (Sym("t"),)) if alpha is None else to_expr(alpha)
        else:
            b = None
            f = atom("f", (U,)) if f is None else to_expr(f)
            alpha = (one if tag == NONLINEAR_GAUGED else atom("alpha", (Sym("t"),))) if alpha is None else to_expr(alpha)
        self.f = f
        self.alpha = alpha
        self.beta = atom("beta", (Sym("t"),)) if beta is None else to_expr(beta)
        self.sigma = atom("sigma", (Sym("t"),)) if sigma is None else to_expr(sigma)
        self.b = b
        self._onshell = {}
        if check:
            self._validate()

    def _validate(self):
        ctx = self.assumptions
        from .calculus import differentiate

        fu = differentiate(self.f, "u", ctx)
        for label, e in (("f_u", fu), ("alpha", self.alpha), ("beta", self.beta), ("sigma", self.sigma)):
            if is_zero(e, ctx) == Zeroness.ZERO:
                raise PdeDefinitionError(f"degenerate instance: {label} vanishes identically")
        if self.tag in (NONLINEAR_GAUGED, LINEAR_GAUGED):
            if is_zero(self.alpha - Rat(1), ctx) != Zeroness.ZERO:
                raise PdeDefinitionError(f"class {self.tag} requires alpha = 1")
        if self.tag == LINEAR_GAUGED:
            if is_zero(to_expr(self.b), ctx) != Zeroness.ZERO:
                raise PdeDefinitionError("class linear-gauged requires b = 0")
        bad_jets = {j for j in jets_of(self.f, ctx) if j != (0, 0)}
        if bad_jets or jets_of(self.alpha, ctx) or jets_of(self.beta, ctx) or jets_of(self.sigma, ctx):
            if bad_jets:
                raise PdeDefinitionError("f may depend on u only")

    def rhs(self):
        """u_t = rhs on solutions."""
        return normalize(
            mul(Rat(-1), add(
                mul(self.alpha, self.f, U_X),
                mul(self.beta, Jet(0, 3)),
                mul(self.sigma, Jet(0, 5)),
            )),
            self.assumptions,
        )

    def equation(self):
        return add(U_T, mul(Rat(-1), self.rhs()))

    def is_linear_f(self):
        from .calculus import differentiate

        return is_zero(differentiate(self.f, "u", self.assumptions, order=2), self.assumptions) == Zeroness.ZERO

    def replace(self, **kw):
        args = dict(tag=self.tag, f=self.f, alpha=self.alpha, beta=self.beta,
                    sigma=self.sigma, b=self.b, assumptions=self.assumptions)
        args.update(kw)
        return PdeInstance(**args)

    def _onshell_image(self, b):
        img = self._onshell.get(b)
        if img is None:
            if b == 0:
                img = self.rhs()
            else:
                img = total_derivative(self._onshell_image(b - 1), "x", self.assumptions)
            self._onshell[b] = img
        return img

    def __repr__(self):
        bits = [f"class={self.tag}", f"f={self.f!r}", f"alpha={self.alpha!r}",
                f"beta={self.beta!r}", f"sigma={self.sigma!r}"]
        if self.b is not None:
            bits.append(f"b={self.b!r}")
        return "PdeInstance(" + ", ".join(bits) + ")"

    # --- wire format ------------------------------------------------------

    def to_json(self):
        from .exprs import to_string

        out = {
            "class": self.tag,
            "f": to_string(self.f),
            "alpha": to_string(self.alpha),
            "beta": to_string(self.beta),
            "sigma": to_string(self.sigma),
            "assumptions": self.assumptions.to_strings(),
        }
        if self.b is not None:
            out["b"] = to_string(self.b)
        return out

    @classmethod
    def from_json(cls, obj):
        from .parser import parse

        if not isinstance(obj, dict) or "class" not in obj:
            raise PdeDefinitionError("instance JSON needs a 'class' field")
        tag = obj["class"]
        assumptions = AssumptionSet.parse(obj.get("assumptions", ()))
        params = obj.get("params") or {}
        bindings = {}
        for name, val in params.items():
            if val is not None:
                bindings[name] = parse(val) if isinstance(val, str) else to_expr(val)

        def rd(key):
            if key not in obj or obj[key] is None:
                return None
            e = parse(obj[key]) if isinstance(obj[key], str) else to_expr(obj[key])
            if bindings:
                e = substitute(e, bindings, assumptions)
            return e

        return cls(
            tag,
            f=rd("f"),
            alpha=rd("alpha"),
            beta=rd("beta"),
            sigma=rd("sigma"),
            b=rd("b"),
            assumptions=assumptions,
        )


def on_shell_reduce(e, pde):
    """Replace every mixed coordinate u_t, u_tx, ..., u_t5x by the
    corresponding x-derivative of the equation's right-hand side and
    normalize; the result contains only pure x-jets."""
    ctx = pde.assumptions
    e = to_expr(e)
    jets = jets_of(e, ctx)
    mixed = sorted(j for j in jets if j[0] == 1)
    if not mixed:
        return normalize(e, ctx)
    bindings = {}
    for a, b in mixed:
        if b + 5 > MAX_X_ORDER:
            raise JetOrderError("on-shell image would exceed the x-order cap")
        bindings[Jet(a, b)] = pde._onshell_image(b)
    return substitute(e, bindings, ctx)
