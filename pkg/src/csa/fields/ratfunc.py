"""Rational functions num/den in canonical form over a tower's algebraic part."""
from __future__ import annotations

from fractions import Fraction

from . import poly as P
from .base import CycElt, Fp


class RatFunc:
    """A reduced fraction of sparse polynomials with monic denominator."""

    __slots__ = ("num", "den", "T")

    def __init__(self, num, den, T, normalized=False):
        self.T = T
        if not normalized:
            if not den:
                raise ZeroDivisionError("rational function with zero denominator")
            if not num:
                den = T._one_poly
            else:
                g = P.gcd(num, den)
                if not _is_one(g):
                    num = P.exact_div(num, g)
                    den = P.exact_div(den, g)
                _, lc = P.leading(den)
                if lc != 1:
                    inv = 1 / lc
                    num = P.scale(num, inv)
                    den = P.scale(den, inv)
        self.num = num
        self.den = den

    # -- coercion -------------------------------------------------------------
    def _c(self, o):
        if isinstance(o, RatFunc):
            if o.T is not self.T and o.T.key != self.T.key:
                raise TypeError("rational functions over different towers")
            return o
        if isinstance(o, (int, Fraction, Fp, CycElt)):
            return self.T(o)
        return NotImplemented

    # -- arithmetic -----------------------------------------------------------
    def __add__(self, o):
        o = self._c(o)
        if o is NotImplemented:
            return NotImplemented
        if _is_one(self.den) and _is_one(o.den):
            return RatFunc(P.add(self.num, o.num), self.den, self.T, True)
        if self.den == o.den:
            return RatFunc(P.add(self.num, o.num), self.den, self.T)
        num = P.add(P.mul(self.num, o.den), P.mul(o.num, self.den))
        return RatFunc(num, P.mul(self.den, o.den), self.T)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(P.neg(self.num), self.den, self.T, True)

    def __pos__(self):
        return self

    def __sub__(self, o):
        o = self._c(o)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, o):
        o = self._c(o)
        if o is NotImplemented:
            return NotImplemented
        return o + (-self)

    def __mul__(self, o):
        if isinstance(o, (int, Fraction, Fp, CycElt)):
            if not o:
                return self.T.zero
            c = self.T.K(o)
            return RatFunc(P.scale(self.num, c), self.den, self.T, True)
        o = self._c(o)
        if o is NotImplemented:
            return NotImplemented
        if not self.num or not o.num:
            return self.T.zero
        a, b, c, d = self.num, self.den, o.num, o.den
        if _is_one(b) and _is_one(d):
            return RatFunc(P.mul(a, c), b, self.T, True)
        g1 = P.gcd(a, d)
        g2 = P.gcd(c, b)
        if not _is_one(g1):
            a, d = P.exact_div(a, g1), P.exact_div(d, g1)
        if not _is_one(g2):
            c, b = P.exact_div(c, g2), P.exact_div(b, g2)
        num, den = P.mul(a, c), P.mul(b, d)
        _, lc = P.leading(den)
        if lc != 1:
            inv = 1 / lc
            num, den = P.scale(num, inv), P.scale(den, inv)
        return RatFunc(num, den, self.T, True)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("inverse of zero rational function")
        _, lc = P.leading(self.num)
        inv = 1 / lc
        return RatFunc(P.scale(self.den, inv), P.scale(self.num, inv), self.T, True)

    def __truediv__(self, o):
        o = self._c(o)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, o):
        o = self._c(o)
        if o is NotImplemented:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return self.T.one
        if not self.num:
            return self.T.zero
        n = self.T.nvars
        return RatFunc(P.power(self.num, k, n), P.power(self.den, k, n), self.T, True)

    # -- predicates -----------------------------------------------------------
    def __bool__(self):
        return bool(self.num)

    def __eq__(self, o):
        o = self._c(o)
        if o is NotImplemented:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        c = self.constant_value()
        if c is not None:
            return hash(c)
        return hash((frozenset(self.num.items()), frozenset(self.den.items())))

    def is_constant(self) -> bool:
        return _is_one(self.den) and all(not any(m) for m in self.num)

    def constant_value(self):
        """The element of the algebraic part, or None if not constant."""
        if not self.is_constant():
            return None
        if not self.num:
            return self.T.K.zero
        return next(iter(self.num.values()))

    def is_polynomial(self) -> bool:
        return _is_one(self.den)

    def __repr__(self):
        return self.T.format(self)


def _is_one(p) -> bool:
    if len(p) != 1:
        return False
    (m, c), = p.items()
    return not any(m) and c == 1
