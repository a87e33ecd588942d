"""Sparse multivariate polynomials over a field.

A polynomial is a dict mapping exponent tuples to nonzero coefficients.
All tuples in one dict have the same length (the number of variables).
Coefficients are whatever the tower's algebraic part uses (Fraction, Fp,
CycElt); only the field operators and truthiness are relied upon.
"""
from __future__ import annotations


def order_key(m):
    """Graded right-to-left lex key; larger key means leading."""
    return (sum(m), tuple(reversed(m)))


def is_zero(a) -> bool:
    return not a


def const(c, n):
    return {(0,) * n: c} if c else {}


def add(a, b):
    out = dict(a)
    for m, c in b.items():
        s = out.get(m)
        if s is None:
            out[m] = c
        else:
            s = s + c
            if s:
                out[m] = s
            else:
                del out[m]
    return out


def neg(a):
    return {m: -c for m, c in a.items()}


def sub(a, b):
    return add(a, neg(b))


def scale(a, c):
    if not c:
        return {}
    return {m: x * c for m, x in a.items()}


def mono_mul(a, e, c):
    """a * c * x^e."""
    return {tuple(i + j for i, j in zip(m, e)): x * c for m, x in a.items()}


def mul(a, b):
    if len(a) == 1 and len(b) == 1:
        (ma, ca), = a.items()
        (mb, cb), = b.items()
        return {tuple(i + j for i, j in zip(ma, mb)): ca * cb}
    if len(a) > len(b):
        a, b = b, a
    out = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = tuple(i + j for i, j in zip(ma, mb))
            s = out.get(m)
            v = ca * cb
            if s is None:
                out[m] = v
            else:
                s = s + v
                if s:
                    out[m] = s
                else:
                    del out[m]
    return out


def power(a, k, n):
    out = const(_one_like(a), n)
    base = a
    while k:
        if k & 1:
            out = mul(out, base)
        base = mul(base, base)
        k >>= 1
    return out


def _one_like(a):
    c = next(iter(a.values()))
    return c ** 0 if not isinstance(c, int) else 1


def leading(a):
    m = max(a, key=order_key)
    return m, a[m]


def is_monomial(a) -> bool:
    return len(a) == 1


def divides_mono(e, m):
    return all(i <= j for i, j in zip(e, m))


def exact_div(a, b):
    """a / b, assuming b divides a exactly (raises ArithmeticError otherwise)."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(b) == 1:
        (mb, cb), = b.items()
        inv = 1 / cb
        out = {}
        for m, c in a.items():
            q = tuple(i - j for i, j in zip(m, mb))
            if min(q, default=0) < 0:
                raise ArithmeticError("inexact polynomial division")
            out[q] = c * inv
        return out
    lb, cb = leading(b)
    inv = 1 / cb
    r = dict(a)
    q = {}
    while r:
        lr, cr = leading(r)
        if not divides_mono(lb, lr):
            raise ArithmeticError("inexact polynomial division")
        e = tuple(i - j for i, j in zip(lr, lb))
        c = cr * inv
        q[e] = c
        r = sub(r, mono_mul(b, e, c))
    return q


def monic(a):
    if not a:
        return a
    _, c = leading(a)
    if c == 1:
        return a
    return scale(a, 1 / c)


# ---------------------------------------------------------------------------
# gcd

def _vars_used(a):
    used = set()
    for m in a:
        for k, e in enumerate(m):
            if e:
                used.add(k)
    return used


def _min_exponents(a):
    it = iter(a)
    lo = list(next(it))
    for m in it:
        for k, e in enumerate(m):
            if e < lo[k]:
                lo[k] = e
    return tuple(lo)


def _split(a, v):
    """View a as a univariate polynomial in x_v: {deg: coefficient poly}."""
    out = {}
    for m, c in a.items():
        d = m[v]
        mm = m[:v] + (0,) + m[v + 1:]
        out.setdefault(d, {})[mm] = c
    return out


def _join(u, v):
    out = {}
    for d, p in u.items():
        for m, c in p.items():
            out[m[:v] + (d,) + m[v + 1:]] = c
    return out


def _content(u):
    g = None
    for p in u.values():
        g = p if g is None else gcd(g, p)
        if len(g) == 1 and not any(next(iter(g))):
            break
    return g


def _udeg(u):
    return max(u) if u else -1


def _prem(u, w, v):
    """Pseudo-remainder of u by w as univariate polys in x_v."""
    dw = _udeg(w)
    lw = w[dw]
    u = dict(u)
    while u and _udeg(u) >= dw:
        du = _udeg(u)
        lu = u[du]
        shift = du - dw
        new = {}
        for d, p in u.items():
            t = mul(p, lw)
            if t:
                new[d] = t
        for d, p in w.items():
            t = mul(p, lu)
            dd = d + shift
            s = sub(new.get(dd, {}), t)
            if s:
                new[dd] = s
            else:
                new.pop(dd, None)
        u = new
    return u


def _primitive(u):
    c = _content(u)
    if len(c) == 1 and not any(next(iter(c))):
        (_, cc), = c.items()
        if cc == 1:
            return u
    return {d: exact_div(p, c) for d, p in u.items()}


def gcd(a, b):
    """Monic gcd of two polynomials (graded right-to-left lex leading term)."""
    if not a:
        return monic(b)
    if not b:
        return monic(a)
    n = len(next(iter(a)))
    if len(a) == 1 or len(b) == 1:
        lo = [min(x, y) for x, y in zip(_min_exponents(a), _min_exponents(b))]
        one = _one_like(a)
        return {tuple(lo): one}
    used = _vars_used(a) | _vars_used(b)
    if not used:
        return const(_one_like(a), n)
    v = max(used)
    ua, ub = _split(a, v), _split(b, v)
    ca, cb = _content(ua), _content(ub)
    cg = gcd(ca, cb)
    ua = {d: exact_div(p, ca) for d, p in ua.items()}
    ub = {d: exact_div(p, cb) for d, p in ub.items()}
    if _udeg(ua) < _udeg(ub):
        ua, ub = ub, ua
    while ub and _udeg(ub) > 0:
        r = _prem(ua, ub, v)
        ua, ub = ub, (_primitive(r) if r else r)
    if ub:
        # constant remainder in x_v: the primitive parts are coprime in x_v
        g = cg
    else:
        g = mul(cg, _join(_primitive(ua), v))
    return monic(g)


def to_str(a, names, fmt_coeff, compound) -> str:
    """Render with terms in descending order; fmt_coeff renders a coefficient."""
    if not a:
        return "0"
    parts = []
    for m in sorted(a, key=order_key, reverse=True):
        c = a[m]
        mono = "*".join(
            (nm if e == 1 else f"{nm}^{e}") for nm, e in zip(names, m) if e
        )
        cs = fmt_coeff(c)
        if not mono:
            parts.append(f"({cs})" if compound(c) else cs)
        elif cs == "1":
            parts.append(mono)
        elif cs == "-1":
            parts.append("-" + mono)
        else:
            parts.append((f"({cs})" if compound(c) else cs) + "*" + mono)
    s = " + ".join(parts)
    return s.replace("+ -", "- ")
