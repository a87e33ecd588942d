"""The algebraic part of a tower: Q, F_p, or a cyclotomic extension of either."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

import sympy
from sympy.ntheory import n_order, primitive_root
from sympy.ntheory.residue_ntheory import nthroot_mod

from ..errors import CharDividesOrder


class Fp:
    """Element of the prime field F_p."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _val(self, o):
        if isinstance(o, Fp):
            return o.v
        if isinstance(o, int):
            return o
        if isinstance(o, Fraction):
            return o.numerator * pow(o.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, o):
        w = self._val(o)
        if w is NotImplemented:
            return NotImplemented
        return Fp(self.v + w, self.p)

    __radd__ = __add__

    def __sub__(self, o):
        w = self._val(o)
        if w is NotImplemented:
            return NotImplemented
        return Fp(self.v - w, self.p)

    def __rsub__(self, o):
        w = self._val(o)
        if w is NotImplemented:
            return NotImplemented
        return Fp(w - self.v, self.p)

    def __mul__(self, o):
        w = self._val(o)
        if w is NotImplemented:
            return NotImplemented
        return Fp(self.v * w, self.p)

    __rmul__ = __mul__

    def __truediv__(self, o):
        w = self._val(o)
        if w is NotImplemented:
            return NotImplemented
        if w % self.p == 0:
            raise ZeroDivisionError("division by zero in F_%d" % self.p)
        return Fp(self.v * pow(w, -1, self.p), self.p)

    def __rtruediv__(self, o):
        w = self._val(o)
        if w is NotImplemented:
            return NotImplemented
        if self.v == 0:
            raise ZeroDivisionError("division by zero in F_%d" % self.p)
        return Fp(w * pow(self.v, -1, self.p), self.p)

    def __neg__(self):
        return Fp(-self.v, self.p)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if k < 0:
            return Fp(pow(self.v, -1, self.p), self.p) ** (-k)
        return Fp(pow(self.v, k, self.p), self.p)

    def __eq__(self, o):
        w = self._val(o)
        if w is NotImplemented:
            return NotImplemented
        return (self.v - w) % self.p == 0

    def __hash__(self):
        return hash(self.v)

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return str(self.v)


# ---------------------------------------------------------------------------
# univariate helpers over a prime field; coefficient lists are low -> high

def _trim(a):
    a = list(a)
    while a and not a[-1]:
        a.pop()
    return a


def _upoly_divmod(a, b):
    a = _trim(a)
    b = _trim(b)
    q = [0] * max(len(a) - len(b) + 1, 0)
    inv = 1 / b[-1] if not isinstance(b[-1], int) else Fraction(1, b[-1])
    while len(a) >= len(b) and a:
        c = a[-1] * inv
        d = len(a) - len(b)
        q[d] = c
        for k, bk in enumerate(b):
            a[d + k] = a[d + k] - c * bk
        a = _trim(a)
    return q, a


def _upoly_mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return _trim(out)


def _upoly_sub(a, b):
    n = max(len(a), len(b))
    return _trim([(a[k] if k < len(a) else 0) - (b[k] if k < len(b) else 0) for k in range(n)])


def _upoly_inverse_mod(a, m, one):
    """Inverse of a modulo the irreducible m (extended Euclid)."""
    r0, r1 = _trim(m), _trim(a)
    s0, s1 = [], [one]
    while r1:
        q, r = _upoly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _upoly_sub(s0, _upoly_mul(q, s1))
    if len(r0) != 1:
        raise ZeroDivisionError("element is not invertible")
    c = r0[0]
    return [x / c for x in s0]


class CycElt:
    """Element of F(zeta) = F[x]/(m(x)) for a prime field F."""

    __slots__ = ("c", "K")

    def __init__(self, coeffs, K: "AlgebraicField"):
        self.c = tuple(coeffs)
        self.K = K

    def _coerce(self, o):
        if isinstance(o, CycElt):
            return o
        if isinstance(o, (int, Fraction, Fp)):
            return self.K.embed_prime(o)
        return NotImplemented

    def __add__(self, o):
        o = self._coerce(o)
        if o is NotImplemented:
            return NotImplemented
        return CycElt(tuple(x + y for x, y in zip(self.c, o.c)), self.K)

    __radd__ = __add__

    def __sub__(self, o):
        o = self._coerce(o)
        if o is NotImplemented:
            return NotImplemented
        return CycElt(tuple(x - y for x, y in zip(self.c, o.c)), self.K)

    def __rsub__(self, o):
        o = self._coerce(o)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __neg__(self):
        return CycElt(tuple(-x for x in self.c), self.K)

    def __pos__(self):
        return self

    def __mul__(self, o):
        if isinstance(o, (int, Fraction, Fp)):
            return CycElt(tuple(x * o for x in self.c), self.K)
        o = self._coerce(o)
        if o is NotImplemented:
            return NotImplemented
        return self.K._mul(self, o)

    __rmul__ = __mul__

    def inverse(self):
        if not self:
            raise ZeroDivisionError("division by zero in %s" % self.K)
        inv = _upoly_inverse_mod(list(self.c), self.K.modulus, self.K.prime_one)
        inv = inv + [self.K.prime_zero] * (self.K.degree - len(inv))
        return CycElt(inv, self.K)

    def __truediv__(self, o):
        o = self._coerce(o)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, o):
        o = self._coerce(o)
        if o is NotImplemented:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        acc = self.K.one
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def __eq__(self, o):
        o = self._coerce(o)
        if o is NotImplemented:
            return NotImplemented
        return all(x == y for x, y in zip(self.c, o.c))

    def __hash__(self):
        if all(not x for x in self.c[1:]):
            return hash(self.c[0])
        return hash(self.c)

    def __bool__(self):
        return any(self.c)

    def __repr__(self):
        return self.K.format(self)


def _cyclotomic_coeffs(n: int):
    x = sympy.Symbol("x")
    return [int(c) for c in reversed(sympy.Poly(sympy.cyclotomic_poly(n, x), x).all_coeffs())]


class AlgebraicField:
    """Q or F_p with a primitive N-th root of unity adjoined.

    When the root already lies in the prime field the elements are plain
    Fractions or Fp values; otherwise they are CycElt residues modulo a
    (factor of the) cyclotomic polynomial.
    """

    def __init__(self, p: int = 0, N: int = 1):
        if p and N % p == 0:
            raise CharDividesOrder(f"characteristic {p} divides {N}")
        self.p = p
        if p == 0 and N % 2 == 1 and N > 1:
            N *= 2  # Q(zeta_N) = Q(zeta_2N) for odd N; keep the even index
        self.N = N
        self.prime_one = Fp(1, p) if p else Fraction(1)
        self.prime_zero = Fp(0, p) if p else Fraction(0)
        self._prim_root = None
        if p == 0:
            if N <= 2:
                self.degree = 1
                self.modulus = None
                self.gen = Fraction(-1) if N == 2 else Fraction(1)
            else:
                self.modulus = [Fraction(c) for c in _cyclotomic_coeffs(N)]
                self.degree = len(self.modulus) - 1
        else:
            d = n_order(p, N) if N > 1 else 1
            if d == 1:
                self.degree = 1
                self.modulus = None
                g = primitive_root(p) if p > 2 else 1
                self.gen = Fp(pow(g, (p - 1) // N, p), p)
            else:
                self.modulus = [Fp(c, p) for c in self._cyclotomic_factor(p, N)]
                self.degree = d
        if self.degree > 1:
            d = self.degree
            self.gen = CycElt([self.prime_zero, self.prime_one] + [self.prime_zero] * (d - 2), self)
            # x^k mod m for k = d .. 2d-2
            self._red = []
            cur = [-c for c in self.modulus[:d]]
            for _ in range(d - 1):
                self._red.append(cur)
                # multiply by x
                top = cur[-1]
                cur = [self.prime_zero] + cur[:-1]
                cur = [cur[i] + top * self._red[0][i] for i in range(d)]
        self.one = self.embed_prime(1)
        self.zero = self.embed_prime(0)

    @staticmethod
    def _cyclotomic_factor(p, N):
        x = sympy.Symbol("x")
        _, facs = sympy.factor_list(sympy.cyclotomic_poly(N, x), x, modulus=p)
        cands = []
        for f, _ in facs:
            coeffs = [int(c) % p for c in reversed(sympy.Poly(f, x).all_coeffs())]
            inv = pow(coeffs[-1], -1, p)
            cands.append([(c * inv) % p for c in coeffs])
        cands.sort(key=lambda c: (len(c), c[::-1]))
        return cands[0]

    # -- element plumbing -------------------------------------------------
    def embed_prime(self, x):
        if self.p:
            if isinstance(x, Fraction):
                x = Fp(x.numerator, self.p) / x.denominator
            v = x if isinstance(x, Fp) else Fp(int(x), self.p)
        else:
            if isinstance(x, Fp):
                raise TypeError("cannot embed F_p element in characteristic 0")
            v = Fraction(x)
        if self.degree == 1:
            return v
        return CycElt([v] + [self.prime_zero] * (self.degree - 1), self)

    def __call__(self, x):
        if isinstance(x, CycElt):
            if x.K is not self and x.K.key != self.key:
                raise TypeError("element of a different cyclotomic field")
            return x
        return self.embed_prime(x)

    @property
    def key(self):
        return (self.p, self.N)

    def _mul(self, a: CycElt, b: CycElt) -> CycElt:
        d = self.degree
        prod = [self.prime_zero] * (2 * d - 1)
        for i, x in enumerate(a.c):
            if not x:
                continue
            for j, y in enumerate(b.c):
                if y:
                    prod[i + j] = prod[i + j] + x * y
        out = prod[:d]
        for k in range(d, 2 * d - 1):
            c = prod[k]
            if c:
                r = self._red[k - d]
                out = [out[i] + c * r[i] for i in range(d)]
        return CycElt(out, self)

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def size(self):
        return self.p ** self.degree if self.p else None

    def is_element(self, x) -> bool:
        if self.degree > 1:
            return isinstance(x, CycElt)
        return isinstance(x, Fp) if self.p else isinstance(x, (int, Fraction))

    def coefficients(self, x):
        """Prime-field coordinates on the power basis of the generator."""
        if self.degree == 1:
            return (x,)
        return x.c

    def from_coefficients(self, cs):
        if self.degree == 1:
            return self.embed_prime(cs[0])
        return CycElt([self.embed_prime(c) for c in cs], self)

    # -- roots of unity ---------------------------------------------------
    def has_zeta(self, n: int) -> bool:
        if self.p and n % self.p == 0:
            return False
        if self.p:
            return (self.p ** self.degree - 1) % n == 0
        return (2 * self.N if self.N % 2 else self.N) % n == 0 or n in (1, 2)

    def zeta(self, n: int):
        """The canonical primitive n-th root of unity."""
        if self.p and n % self.p == 0:
            raise CharDividesOrder(f"characteristic {self.p} divides {n}")
        if n == 1:
            return self.one
        if n == 2:
            return -self.one
        if self.N % n == 0:
            return self.gen ** (self.N // n)
        if self.p and (self.p ** self.degree - 1) % n == 0:
            return self.primitive_element() ** ((self.p ** self.degree - 1) // n)
        from ..errors import MissingRootOfUnity

        raise MissingRootOfUnity(f"no primitive {n}-th root of unity in {self}")

    def primitive_element(self):
        """Generator of the multiplicative group of a finite field."""
        if self._prim_root is None:
            q = self.p ** self.degree
            primes = list(sympy.factorint(q - 1))
            for x in self.elements():
                if x and all(x ** ((q - 1) // r) != 1 for r in primes):
                    self._prim_root = x
                    break
        return self._prim_root

    def elements(self):
        """Enumerate a finite field in a fixed order (finite fields only)."""
        if not self.p:
            raise ValueError("infinite field")
        from itertools import product

        for cs in product(range(self.p), repeat=self.degree):
            yield self.from_coefficients(list(reversed(cs))[::-1] if False else cs)

    # -- powers -------------------------------------------------------------
    def nth_root(self, c, m: int):
        """Some y with y^m = c, or None when c is not an m-th power."""
        c = self(c)
        if not c:
            return self.zero
        if m == 1:
            return c
        if self.p == 0 and self.degree == 1:
            return _rational_root(c, m)
        if self.p and self.degree == 1:
            r = nthroot_mod(c.v, m, self.p)
            return None if r is None else Fp(r, self.p)
        if self.p:
            q = self.p ** self.degree
            if c ** ((q - 1) // gcd(m, q - 1)) != 1:
                return None
            for y in self.elements():
                if y ** m == c:
                    return y
            return None
        return _cyclotomic_root(self, c, m)

    # -- text ---------------------------------------------------------------
    def gen_name(self) -> str:
        return f"zeta{self.N}"

    def format(self, x) -> str:
        if self.degree == 1:
            return str(x)
        terms = []
        name = self.gen_name()
        for k, cf in enumerate(x.c):
            if not cf:
                continue
            mono = "" if k == 0 else (name if k == 1 else f"{name}^{k}")
            if not mono:
                terms.append(str(cf))
            elif cf == 1:
                terms.append(mono)
            elif cf == -1 and not self.p:
                terms.append("-" + mono)
            else:
                terms.append(f"{cf}*{mono}")
        if not terms:
            return "0"
        s = " + ".join(terms).replace("+ -", "- ")
        return s

    def is_compound(self, x) -> bool:
        """Whether format(x) needs parentheses inside a product."""
        if self.degree == 1:
            return False
        return sum(1 for cf in x.c if cf) > 1

    def __repr__(self):
        base = "Q" if not self.p else f"F_{self.p}"
        if self.N <= 2 and self.degree == 1 and not self.p:
            return base
        return f"{base}(zeta{self.N})" if self.degree > 1 else base


def _int_root(n: int, m: int):
    r, exact = sympy.integer_nthroot(n, m)
    return r if exact else None


def _rational_root(c: Fraction, m: int):
    sign = 1
    if c < 0:
        if m % 2 == 0:
            return None
        sign = -1
    a = _int_root(abs(c.numerator), m)
    b = _int_root(c.denominator, m)
    if a is None or b is None:
        return None
    return Fraction(sign * a, b)


@lru_cache(maxsize=None)
def _sympy_cyclotomic_domain(N):
    z = sympy.exp(2 * sympy.pi * sympy.I / N)
    return sympy.QQ.algebraic_field(z), z


def _cyclotomic_root(K: AlgebraicField, c: CycElt, m: int):
    """Exact m-th root in Q(zeta_N) via factorisation of X^m - c."""
    dom, z = _sympy_cyclotomic_domain(K.N)
    X = sympy.Symbol("X")
    cexpr = sum(sympy.Rational(cf.numerator, cf.denominator) * z ** k for k, cf in enumerate(c.c))
    poly = sympy.Poly(X ** m - cexpr, X, domain=dom)
    _, facs = poly.factor_list()
    for f, _ in facs:
        if f.degree() != 1:
            continue
        a1, a0 = f.all_coeffs()
        cand = _sympy_to_cyc(K, -a0 / a1, dom)
        if cand is not None and cand ** m == c:
            return cand
    return None


def _sympy_to_cyc(K, expr, dom):
    anp = dom.from_sympy(expr)
    # dom.ext is zeta_N itself, so the ANP coefficients are on its power basis
    coeffs = [Fraction(int(q.numerator), int(q.denominator)) for q in reversed(anp.to_list())]
    coeffs = coeffs + [Fraction(0)] * (K.degree - len(coeffs))
    return CycElt(coeffs[: K.degree], K) if len(coeffs) <= K.degree else None
