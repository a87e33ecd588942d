"""Finite abelian groups Z/o_1 x ... x Z/o_k written additively."""
from __future__ import annotations

from itertools import product
from math import gcd, lcm

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import hermite_normal_form, smith_normal_decomp


class AbelianGroup:
    """The group prod Z/o_i with elements as exponent tuples."""

    def __init__(self, orders):
        self.orders = tuple(int(o) for o in orders)

    @property
    def rank(self) -> int:
        return len(self.orders)

    @property
    def order(self) -> int:
        n = 1
        for o in self.orders:
            n *= o
        return n

    @property
    def exponent(self) -> int:
        return lcm(*self.orders) if self.orders else 1

    def zero(self):
        return (0,) * self.rank

    def norm(self, v):
        return tuple(x % o for x, o in zip(v, self.orders))

    def add(self, u, v):
        return tuple((x + y) % o for x, y, o in zip(u, v, self.orders))

    def sub(self, u, v):
        return tuple((x - y) % o for x, y, o in zip(u, v, self.orders))

    def neg(self, v):
        return tuple((-x) % o for x, o in zip(v, self.orders))

    def mul(self, k, v):
        return tuple((k * x) % o for x, o in zip(v, self.orders))

    def element_order(self, v) -> int:
        n = 1
        for x, o in zip(v, self.orders):
            n = lcm(n, o // gcd(x % o, o))
        return n

    def elements(self):
        """All elements in lexicographic order of exponent tuples."""
        return list(product(*[range(o) for o in self.orders]))

    def span(self, gens):
        """Set of elements of the subgroup generated by gens."""
        seen = {self.zero()}
        frontier = [self.zero()]
        gens = [self.norm(g) for g in gens]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.add(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return seen

    def subgroup_base(self, gens):
        """Independent generators (vector, order) of <gens>, invariant factors ascending.

        Uses the lattice L = <gens> + sum o_i Z e_i in Z^k: with B an integral
        basis of L and D = diag(o_i), the subgroup is Z^k / (B^-1 D) Z^k in
        B-coordinates; a Smith form of B^-1 D reads off the cyclic factors.
        """
        k = self.rank
        if k == 0:
            return []
        cols = [list(self.norm(g)) for g in gens] + [
            [self.orders[i] if j == i else 0 for j in range(k)] for i in range(k)
        ]
        L = Matrix(k, len(cols), lambda i, j: cols[j][i])
        B = hermite_normal_form(L)
        D = Matrix.diag(*self.orders)
        X = B.inv() * D
        S, U, _ = smith_normal_decomp(X, domain=ZZ)
        G = B * U.inv()
        out = []
        for i in range(k):
            s = abs(int(S[i, i]))
            if s == 1:
                continue
            v = self.norm(tuple(int(G[j, i]) for j in range(k)))
            out.append((v, s))
        out.sort(key=lambda t: t[1])
        return out

    def subgroup_order(self, gens) -> int:
        n = 1
        for _, s in self.subgroup_base(gens):
            n *= s
        return n

    def coordinates_in(self, base, v):
        """Exponents c_i with v = sum c_i b_i for an independent base, or None."""
        ranges = [range(s) for _, s in base]
        v = self.norm(v)
        for cs in product(*ranges):
            acc = self.zero()
            for c, (b, _) in zip(cs, base):
                acc = self.add(acc, self.mul(c, b))
            if acc == v:
                return cs
        return None
