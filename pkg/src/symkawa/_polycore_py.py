"""Polynomial core: Laurent polynomials and rational normal forms over Q.

This is the hot kernel of the engine.  Values are plain Python data:

* generator  -- interned Gen wrapper around a structural tuple,
* monomial   -- tuple of (Gen, exponent) pairs sorted by generator key,
* polynomial -- dict {monomial: Fraction} with nonzero coefficients,
* rnf        -- (numerator poly, denominator poly) pair.

Exponents are int / Fraction / LinExp (see linexp).  Generator kinds:

===========  ====================================================
K_SYM        named symbol (independent variable or parameter)
K_JET        jet coordinate, t-order a in {0,1}, x-order b in 0..10
K_ATOM       opaque function atom: name, partial orders, frozen args
K_APP        unary kernel ln/sin/cos/arctan of a frozen rnf argument
K_EXP        exponential kernel: direction monomial, exponent slot
             carries the rational content (e^(c*M) has slot c)
K_POWPOS     positive base to a fractional power; exponent constant
             part canonicalized to [0,1), integer parts expanded
K_POWOP      opaque power (unknown-sign base, non-integer exponent);
             merged only by integer multiplicity
K_POLY       wrapped multi-term polynomial, used inside K_EXP
             directions and nowhere else
===========  ====================================================

Everything here is pure and treats inputs as immutable; the intern and
key caches are append-only dicts (safe to share across threads under
CPython) and never visible to callers.

A compiled twin of this module lives in _polycore.pyx; symkawa.polycore
selects one of the two at import time.
"""

from fractions import Fraction

from .linexp import (
    LinExp,
    exp_add,
    exp_const_frac_split,
    exp_is_number,
    exp_neg,
    exp_scale,
    exp_sort_key,
    exp_weight,
    make_exp,
)

K_SYM = 0
K_JET = 1
K_ATOM = 2
K_APP = 3
K_EXP = 4
K_POWPOS = 5
K_POWOP = 6
K_POLY = 7

_ONE = Fraction(1)

# t-derivatives of these order-0 atoms rewrite to another atom instead of
# incrementing the order (A is the antiderivative of alpha).
ATOM_DERIVATIVE_REWRITES = {"A": "alpha"}


class Gen:
    """Interned generator; `data` is the structural tuple, `key` a fully
    comparable sort key, `_hash` precomputed."""

    __slots__ = ("data", "key", "_hash")

    def __init__(self, data, key):
        self.data = data
        self.key = key
        self._hash = hash(data)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return self is other or (isinstance(other, Gen) and self.data == other.data)

    def __lt__(self, other):
        return self.key < other.key

    def __repr__(self):
        return f"Gen{self.data!r}"


_INTERN = {}


def _gen_key(data):
    kind = data[0]
    if kind == K_SYM:
        return (K_SYM, data[1])
    if kind == K_JET:
        return (K_JET, data[1], data[2])
    if kind == K_ATOM:
        return (K_ATOM, data[1], data[2], tuple(frnf_key(a) for a in data[3]))
    if kind == K_APP:
        return (K_APP, data[1], frnf_key(data[2]))
    if kind == K_EXP:
        return (K_EXP, mono_key(data[1]))
    if kind == K_POWPOS:
        return (K_POWPOS, fpoly_key(data[1]))
    if kind == K_POWOP:
        return (K_POWOP, frnf_key(data[1]), exp_sort_key(data[2]))
    if kind == K_POLY:
        return (K_POLY, fpoly_key(data[1]))
    raise ValueError(f"unknown generator kind {kind}")


def intern_gen(data):
    g = _INTERN.get(data)
    if g is None:
        g = Gen(data, _gen_key(data))
        _INTERN[data] = g
    return g


def g_sym(name):
    return intern_gen((K_SYM, name))


def g_jet(a, b):
    return intern_gen((K_JET, a, b))


def g_atom(name, orders, args):
    return intern_gen((K_ATOM, name, tuple(orders), tuple(args)))


def g_app(fname, arg):
    return intern_gen((K_APP, fname, arg))


def g_exp(direction):
    return intern_gen((K_EXP, direction))


def g_powpos(base_fp):
    return intern_gen((K_POWPOS, base_fp))


def g_powop(base_frnf, exponent):
    return intern_gen((K_POWOP, base_frnf, exponent))


def g_poly(fp):
    return intern_gen((K_POLY, fp))


# ---------------------------------------------------------------------------
# monomials

_MONO_KEY = {}


def mono_key(m):
    k = _MONO_KEY.get(m)
    if k is None:
        grade = Fraction(0)
        parts = []
        for g, e in m:
            grade += exp_weight(e)
            parts.append((g.key, exp_sort_key(e)))
        k = (grade, tuple(parts))
        _MONO_KEY[m] = k
    return k


def fpoly_key(fp):
    return tuple((mono_key(m), c) for m, c in fp)


def frnf_key(fr):
    return (fpoly_key(fr[0]), fpoly_key(fr[1]))


def _canon_powpos(g, e):
    """Return ([(gen, exp)] or [], carry_int) with the POWPOS exponent's
    constant part reduced to [0,1).  carry_int may be negative."""
    n, rem = exp_const_frac_split(e)
    if rem == 0:
        return [], n
    return [(g, rem)], n


def mono_mul(m1, m2):
    """Merge two monomials.  Returns (mono, carries) where carries is a
    list of (frozen base poly, positive int power) to be multiplied in
    (POWPOS integer overflow).  Negative carries cannot arise here since
    both inputs are canonical."""
    if not m1:
        return m2, None
    if not m2:
        return m1, None
    out = []
    carries = None
    i = j = 0
    n1, n2 = len(m1), len(m2)
    while i < n1 and j < n2:
        g1, e1 = m1[i]
        g2, e2 = m2[j]
        if g1 is g2 or g1.data == g2.data:
            e = exp_add(e1, e2)
            kind = g1.data[0]
            if kind == K_POWPOS:
                kept, carry = _canon_powpos(g1, e)
                out.extend(kept)
                if carry:
                    if carry < 0:
                        raise AssertionError("negative POWPOS carry in mono_mul")
                    if carries is None:
                        carries = []
                    carries.append((g1.data[1], carry))
            elif e != 0:
                out.append((g1, e))
            i += 1
            j += 1
        elif g1.key < g2.key:
            out.append((g1, e1))
            i += 1
        else:
            out.append((g2, e2))
            j += 1
    if i < n1:
        out.extend(m1[i:])
    if j < n2:
        out.extend(m2[j:])
    return tuple(out), carries


def mono_inv(m):
    """Invert a monomial.  Returns (mono, den_carries) where den_carries
    lists (frozen base poly, positive int power) that belong in the
    denominator (POWPOS underflow)."""
    out = []
    dens = None
    for g, e in m:
        ne = exp_neg(e)
        if g.data[0] == K_POWPOS:
            kept, carry = _canon_powpos(g, ne)
            out.extend(kept)
            if carry:
                if carry > 0:
                    raise AssertionError("positive POWPOS carry in mono_inv")
                if dens is None:
                    dens = []
                dens.append((g.data[1], -carry))
        else:
            out.append((g, ne))
    return tuple(out), dens


def mono_pow_int(m, n):
    """Raise a monomial to a positive integer power."""
    out = []
    carries = None
    for g, e in m:
        e2 = exp_scale(e, n)
        if g.data[0] == K_POWPOS:
            kept, carry = _canon_powpos(g, e2)
            out.extend(kept)
            if carry:
                if carries is None:
                    carries = []
                carries.append((g.data[1], carry))
        elif e2 != 0:
            out.append((g, e2))
    return tuple(out), carries


# ---------------------------------------------------------------------------
# polynomials

def p_zero():
    return {}


def p_one():
    return {(): _ONE}


def p_const(c):
    c = Fraction(c)
    return {(): c} if c else {}


def p_gen(g, e=1):
    if e == 0:
        return p_one()
    if g.data[0] == K_POWPOS:
        kept, carry = _canon_powpos(g, e)
        p = {tuple(kept): _ONE}
        if carry:
            if carry < 0:
                raise AssertionError("p_gen cannot emit denominators")
            p = p_mul(p, p_pow_int(p_thaw(g.data[1]), carry))
        return p
    return {((g, e),): _ONE}


def p_is_zero(p):
    return not p


def p_is_one(p):
    return len(p) == 1 and p.get(()) == 1


def p_is_const(p):
    return not p or (len(p) == 1 and () in p)


def p_add(p, q):
    if not p:
        return dict(q)
    if not q:
        return dict(p)
    out = dict(p)
    for m, c in q.items():
        nc = out.get(m)
        if nc is None:
            out[m] = c
        else:
            nc = nc + c
            if nc:
                out[m] = nc
            else:
                del out[m]
    return out


def p_neg(p):
    return {m: -c for m, c in p.items()}


def p_sub(p, q):
    return p_add(p, p_neg(q))


def p_scale(p, c):
    c = Fraction(c)
    if not c:
        return {}
    if c == 1:
        return dict(p)
    return {m: k * c for m, k in p.items()}


def _accumulate(out, m, c):
    nc = out.get(m)
    if nc is None:
        out[m] = c
    else:
        nc = nc + c
        if nc:
            out[m] = nc
        else:
            del out[m]


def p_mul(p, q):
    if not p or not q:
        return {}
    if p_is_one(p):
        return dict(q)
    if p_is_one(q):
        return dict(p)
    out = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m, carries = mono_mul(m1, m2)
            c = c1 * c2
            if carries is None:
                _accumulate(out, m, c)
            else:
                t = {m: c}
                for base_fp, n in carries:
                    t = p_mul(t, p_pow_int(p_thaw(base_fp), n))
                for mm, cc in t.items():
                    _accumulate(out, mm, cc)
    return out


def p_mul_mono(p, m0, c0):
    """Multiply a polynomial by a single monomial term."""
    if not p:
        return {}
    out = {}
    for m, c in p.items():
        mm, carries = mono_mul(m, m0)
        cc = c * c0
        if carries is None:
            _accumulate(out, mm, cc)
        else:
            t = {mm: cc}
            for base_fp, n in carries:
                t = p_mul(t, p_pow_int(p_thaw(base_fp), n))
            for m2, c2 in t.items():
                _accumulate(out, m2, c2)
    return out


def p_pow_int(p, n):
    if n < 0:
        raise ValueError("p_pow_int expects n >= 0")
    result = p_one()
    base = p
    while n:
        if n & 1:
            result = p_mul(result, base)
        base_needed = n >> 1
        if base_needed:
            base = p_mul(base, base)
        n = base_needed
    return result


def p_freeze(p):
    return tuple(sorted(p.items(), key=lambda kv: mono_key(kv[0])))


def p_thaw(fp):
    return dict(fp)


def p_leading(p):
    """(mono, coeff) with the largest mono_key; p must be nonzero."""
    m = max(p, key=mono_key)
    return m, p[m]


def _mono_try_div(m, d):
    """m / d as a monomial, or None when exponent kinds do not allow an
    exact quotient (POWPOS fractional mismatch)."""
    dd = dict(m)
    for g, e in d:
        have = dd.get(g)
        if have is None:
            if g.data[0] == K_POWPOS:
                return None
            dd[g] = exp_neg(e)
            continue
        ne = exp_add(have, exp_neg(e))
        if g.data[0] == K_POWPOS:
            if not exp_is_number(ne) or not (0 <= ne < 1):
                return None
            if ne == 0:
                del dd[g]
            else:
                dd[g] = ne
        elif ne == 0:
            del dd[g]
        else:
            dd[g] = ne
    return tuple(sorted(dd.items(), key=lambda kv: kv[0].key))


def p_divexact(num, den):
    """Exact polynomial quotient num/den, or None.  Laurent-safe for the
    denominators this engine produces; used to keep repeated-denominator
    sums from ballooning."""
    if p_is_zero(den):
        raise ZeroDivisionError("polynomial division by zero")
    if p_is_one(den):
        return dict(num)
    if p_is_zero(num):
        return {}
    if len(den) == 1:
        (md, cd), = den.items()
        mi, carries = mono_inv(md)
        if carries:
            return None
        return p_mul_mono(num, mi, 1 / cd)
    rem = dict(num)
    q = {}
    dm, dc = p_leading(den)
    guard = 4 * (len(num) + len(den)) + 16
    while rem:
        guard -= 1
        if guard < 0:
            return None
        rm, rc = p_leading(rem)
        qm = _mono_try_div(rm, dm)
        if qm is None:
            return None
        qc = rc / dc
        _accumulate(q, qm, qc)
        rem = p_sub(rem, p_mul_mono(den, qm, qc))
    return q


# ---------------------------------------------------------------------------
# rational normal forms

def r_const(c):
    return (p_const(c), p_one())


def r_make(num, den=None):
    if den is None:
        return (num, p_one())
    return r_canon((num, den))


def r_is_zero(r):
    return not r[0]


def r_neg(r):
    return (p_neg(r[0]), r[1])


def r_add(r1, r2):
    n1, d1 = r1
    n2, d2 = r2
    if not n1:
        return r2
    if not n2:
        return r1
    if d1 == d2:
        return r_canon((p_add(n1, n2), d1))
    q = p_divexact(d2, d1)
    if q is not None:
        return r_canon((p_add(p_mul(n1, q), n2), d2))
    q = p_divexact(d1, d2)
    if q is not None:
        return r_canon((p_add(n1, p_mul(n2, q)), d1))
    return r_canon((p_add(p_mul(n1, d2), p_mul(n2, d1)), p_mul(d1, d2)))


def r_sub(r1, r2):
    return r_add(r1, r_neg(r2))


def r_mul(r1, r2):
    n1, d1 = r1
    n2, d2 = r2
    if not n1 or not n2:
        return (p_zero(), p_one())
    # cross-cancel first so denominators do not accumulate
    q = p_divexact(n1, d2)
    if q is not None:
        n1, d2 = q, p_one()
    else:
        q = p_divexact(n2, d1)
        if q is not None:
            n2, d1 = q, p_one()
    return r_canon((p_mul(n1, n2), p_mul(d1, d2)))


def r_scale(r, c):
    return (p_scale(r[0], c), r[1])


def r_inv(r):
    n, d = r
    if not n:
        raise ZeroDivisionError("inverting zero rational form")
    return r_canon((d, n))


def r_div(r1, r2):
    return r_mul(r1, r_inv(r2))


def r_pow_int(r, n):
    if n >= 0:
        return r_canon((p_pow_int(r[0], n), p_pow_int(r[1], n)))
    return r_canon((p_pow_int(r[1], -n), p_pow_int(r[0], -n)))


def r_freeze(r):
    return (p_freeze(r[0]), p_freeze(r[1]))


def r_thaw(fr):
    return (p_thaw(fr[0]), p_thaw(fr[1]))


def _den_content(den):
    """Common monomial factor of a denominator: per-generator minimum
    exponent, generators absent from a monomial counting as 0.  POWPOS
    and LinExp exponent slots are skipped.  Negative minima are kept so
    shared negative exponents get cleared out of denominators."""
    monos = iter(den)
    first = next(monos)
    cand = {
        g: e for g, e in first if g.data[0] != K_POWPOS and exp_is_number(e)
    }
    for m in monos:
        if not cand:
            return None
        cur = dict(m)
        for g in list(cand):
            e = cur.get(g, 0)
            if not exp_is_number(e):
                del cand[g]
                continue
            e = min(cand[g], e)
            if e == 0:
                del cand[g]
            else:
                cand[g] = e
    if not cand:
        return None
    return tuple(sorted(cand.items(), key=lambda kv: kv[0].key))


def r_canon(r):
    num, den = r
    if p_is_zero(den):
        raise ZeroDivisionError("zero denominator in rational form")
    if not num:
        return (p_zero(), p_one())
    if p_is_one(den):
        return (num, den)
    if num == den:
        return (p_one(), p_one())
    while True:
        if len(den) == 1:
            (m, c), = den.items()
            mi, dens = mono_inv(m)
            num = p_mul_mono(num, mi, 1 / c)
            den = p_one()
            if dens:
                for base_fp, n in dens:
                    den = p_mul(den, p_pow_int(p_thaw(base_fp), n))
                if p_is_one(den):
                    return (num, den)
                continue
            return (num, den)
        q = p_divexact(num, den)
        if q is not None:
            return (q, p_one())
        content = _den_content(den)
        if content:
            mi, dens = mono_inv(content)
            if not dens:
                den = p_mul_mono(den, mi, _ONE)
                num = p_mul_mono(num, mi, _ONE)
                continue
        break
    _, lc = p_leading(den)
    if lc != 1:
        inv = 1 / lc
        num = p_scale(num, inv)
        den = p_scale(den, inv)
    return (num, den)


def exp_to_poly(e):
    """Exponent value as a polynomial (parameters become symbols)."""
    if not isinstance(e, LinExp):
        return p_const(e)
    p = p_const(e.const)
    for name, c in e.terms:
        _accumulate(p, ((g_sym(name), 1),), c)
    return p


# ---------------------------------------------------------------------------
# differentiation
#
# Implemented in logarithmic form: d(c*m) = c * m * sum over factors of
# exp * (d gen)/gen, which never needs exponent-shift canonicalization.

def _ln_gen_rnf(g):
    """ln(gen value) as an rnf, used only for parameter derivatives of
    parameterized exponents."""
    fr = (p_freeze(p_gen(g)), p_freeze(p_one()))
    return (p_gen(g_app("ln", fr)), p_one())


def _exp_param_deriv(e, v_name):
    """d(exponent)/d(param) as a Fraction (exponents are linear)."""
    if not isinstance(e, LinExp):
        return Fraction(0)
    for n, c in e.terms:
        if n == v_name:
            return c
    return Fraction(0)


def gen_logderiv(g, e, v):
    """exp * d(gen)/gen with respect to generator v (a K_SYM or K_JET
    Gen), as an rnf.  Returns None when identically zero."""
    data = g.data
    kind = data[0]
    vname = v.data[1] if v.data[0] == K_SYM else None
    if kind == K_SYM:
        if g is v or g.data == v.data:
            return r_canon((exp_to_poly(e), p_gen(g)))
        if vname is not None:
            c = _exp_param_deriv(e, vname)
            if c:
                return r_scale(_ln_gen_rnf(g), c)
        return None
    if kind == K_JET:
        if g is v or g.data == v.data:
            return r_canon((exp_to_poly(e), p_gen(g)))
        return None
    if kind == K_ATOM:
        name, orders, args = data[1], data[2], data[3]
        total = None
        for i, fa in enumerate(args):
            da = r_diff(r_thaw(fa), v)
            if r_is_zero(da):
                continue
            if name in ATOM_DERIVATIVE_REWRITES and sum(orders) == 0:
                datom = g_atom(ATOM_DERIVATIVE_REWRITES[name], orders, args)
            else:
                new_orders = list(orders)
                new_orders[i] += 1
                datom = g_atom(name, new_orders, args)
            term = r_mul((p_gen(datom), p_one()), da)
            total = term if total is None else r_add(total, term)
        if total is None:
            return None
        return r_canon((p_mul(total[0], exp_to_poly(e)), p_mul(total[1], p_gen(g))))
    if kind == K_APP:
        fname, fa = data[1], data[2]
        arg = r_thaw(fa)
        da = r_diff(arg, v)
        if r_is_zero(da):
            return None
        if fname == "ln":
            dg = r_div(da, arg)
        elif fname == "arctan":
            one_plus = r_add(r_const(1), r_mul(arg, arg))
            dg = r_div(da, one_plus)
        elif fname == "sin":
            dg = r_mul((p_gen(g_app("cos", fa)), p_one()), da)
        elif fname == "cos":
            dg = r_neg(r_mul((p_gen(g_app("sin", fa)), p_one()), da))
        else:
            raise ValueError(f"unknown kernel {fname}")
        num = p_mul(dg[0], exp_to_poly(e))
        return r_canon((num, p_mul(dg[1], p_gen(g))))
    if kind == K_EXP:
        direction = data[1]
        dm = _mono_value_diff(direction, v)
        if dm is None:
            return None
        return r_scale(dm, _exp_slot_scale(e))
    if kind == K_POWPOS:
        base = p_thaw(data[1])
        db = r_diff((base, p_one()), v)
        total = None
        if not r_is_zero(db):
            total = r_canon((p_mul(db[0], exp_to_poly(e)), p_mul(db[1], base)))
        if vname is not None:
            c = _exp_param_deriv(e, vname)
            if c:
                lnb = (p_gen(g_app("ln", (data[1], p_freeze(p_one())))), p_one())
                term = r_scale(lnb, c)
                total = term if total is None else r_add(total, term)
        return total
    if kind == K_POWOP:
        base = r_thaw(data[1])
        ee = data[2]
        if not exp_is_number(e):
            raise ValueError("opaque power with parameterized multiplicity")
        db = r_diff(base, v)
        total = None
        if not r_is_zero(db):
            tot_e = exp_scale(ee, e)
            total = r_mul((exp_to_poly(tot_e), p_one()), r_div(db, base))
        if vname is not None:
            c = _exp_param_deriv(ee, vname)
            if c:
                lnb = (p_gen(g_app("ln", data[1])), p_one())
                term = r_scale(lnb, c * e)
                total = term if total is None else r_add(total, term)
        return total
    if kind == K_POLY:
        base = p_thaw(data[1])
        db = r_diff((base, p_one()), v)
        if r_is_zero(db):
            return None
        return r_canon((p_mul(db[0], exp_to_poly(e)), p_mul(db[1], base)))
    raise ValueError(f"unknown generator kind {kind}")


def _exp_slot_scale(e):
    return Fraction(e)


def _mono_value_diff(m, v):
    """Derivative of the value of monomial m (coefficient 1), as an rnf;
    None when zero."""
    total = None
    for g, e in m:
        ld = gen_logderiv(g, e, v)
        if ld is None:
            continue
        total = ld if total is None else r_add(total, ld)
    if total is None:
        return None
    return r_mul(({m: _ONE}, p_one()), total)


def r_diff(r, v):
    num, den = r
    dn = p_diff_rnf(num, v)
    if p_is_one(den):
        return dn
    dd = p_diff_rnf(den, v)
    if r_is_zero(dd):
        return r_canon((dn[0], p_mul(dn[1], den)))
    # (n/d)' = n'/d - n d'/d^2
    t1 = r_canon((dn[0], p_mul(dn[1], den)))
    t2 = r_canon((p_mul(num, dd[0]), p_mul(dd[1], p_mul(den, den))))
    return r_sub(t1, t2)


def p_diff_rnf(p, v):
    total = (p_zero(), p_one())
    for m, c in p.items():
        dm = _mono_value_diff(m, v)
        if dm is None:
            continue
        total = r_add(total, r_scale(dm, c))
    return total


IMPLEMENTATION = "python"
