"""Finite-dimensional associative algebras given by structure constants."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import isqrt
from typing import Optional

from . import linalg
from .errors import (
    DimensionMismatch,
    FieldMismatch,
    NotCentralSimple,
    NotInvertible,
    ParentMismatch,
)
from .fields import FieldTower


class Algebra:
    """An associative algebra over a tower with a distinguished basis.

    ``table[(i, j)]`` lists ``(k, c)`` pairs meaning e_i e_j = sum c e_k.
    Missing entries are zero products.
    """

    def __init__(self, T: FieldTower, labels, table, one=None, degree=None,
                 basis_trd=None, name=None, check=True):
        self.T = T
        self.labels = list(labels)
        self.dim = len(self.labels)
        self._table = {key: tuple((k, T(c)) for k, c in v if c) for key, v in table.items()}
        self.name = name or f"algebra[{self.dim}]"
        self.degree = degree
        self.basis_trd = None if basis_trd is None else [T(c) for c in basis_trd]
        self.factors = None
        self.meta = {}
        if one is None:
            one = self._find_unity()
        self._one = {k: T(c) for k, c in dict(one).items() if c}
        if check and self.dim <= 64:
            bad = self.associativity_failure()
            if bad is not None:
                raise ValueError(f"structure constants are not associative at {bad}")

    # -- basis-level products --------------------------------------------------
    def basis_product(self, i: int, j: int):
        return self._table.get((i, j), ())

    def _find_unity(self):
        # u with u e_j = e_j and e_j u = e_j for all j
        n = self.dim
        rows, rhs = [], []
        zero, one = self.T.zero, self.T.one
        for j in range(n):
            for side in (0, 1):
                cols = [[zero] * n for _ in range(n)]
                for i in range(n):
                    prod_ = self.basis_product(i, j) if side == 0 else self.basis_product(j, i)
                    for k, c in prod_:
                        cols[k][i] = cols[k][i] + c
                for k in range(n):
                    rows.append(cols[k])
                    rhs.append(one if k == j else zero)
        sol = linalg.solve(rows, rhs)
        if sol is None:
            raise ValueError("algebra has no unity")
        return {k: c for k, c in enumerate(sol) if c}

    # -- elements -------------------------------------------------------------
    def elem(self, coords) -> "AlgebraElement":
        if isinstance(coords, dict):
            d = {int(k): self.T(c) for k, c in coords.items()}
        else:
            d = {k: self.T(c) for k, c in enumerate(coords)}
        return AlgebraElement(self, {k: c for k, c in d.items() if c})

    def basis(self, i: int) -> "AlgebraElement":
        return AlgebraElement(self, {i: self.T.one})

    def basis_elements(self):
        return [self.basis(i) for i in range(self.dim)]

    def one(self) -> "AlgebraElement":
        return AlgebraElement(self, dict(self._one))

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})

    def scalar(self, c) -> "AlgebraElement":
        return self.one() * self.T(c)

    def from_vector(self, v) -> "AlgebraElement":
        return AlgebraElement(self, {k: c for k, c in enumerate(v) if c})

    # -- linear maps ------------------------------------------------------------
    def mul_raw(self, x: dict, y: dict) -> dict:
        out = {}
        for i, a in x.items():
            for j, b in y.items():
                prod_ = self.basis_product(i, j)
                if not prod_:
                    continue
                ab = a * b
                for k, c in prod_:
                    v = ab * c
                    s = out.get(k)
                    if s is None:
                        out[k] = v
                    else:
                        s = s + v
                        if s:
                            out[k] = s
                        else:
                            del out[k]
        return out

    def left_matrix(self, x: "AlgebraElement"):
        """Matrix of y -> x y; column j holds the coordinates of x e_j."""
        n = self.dim
        zero = self.T.zero
        M = [[zero] * n for _ in range(n)]
        for j in range(n):
            for k, c in self.mul_raw(x.c, {j: self.T.one}).items():
                M[k][j] = c
        return M

    def right_matrix(self, x: "AlgebraElement"):
        n = self.dim
        zero = self.T.zero
        M = [[zero] * n for _ in range(n)]
        for j in range(n):
            for k, c in self.mul_raw({j: self.T.one}, x.c).items():
                M[k][j] = c
        return M

    # -- structure checks ---------------------------------------------------------
    def associativity_failure(self, triples=None):
        """First basis triple (i, j, k) with (e_i e_j) e_k != e_i (e_j e_k), or None."""
        one = self.T.one
        it = triples if triples is not None else product(range(self.dim), repeat=3)
        for i, j, k in it:
            a = self.mul_raw(self.mul_raw({i: one}, {j: one}), {k: one})
            b = self.mul_raw({i: one}, self.mul_raw({j: one}, {k: one}))
            if a != b:
                return (i, j, k)
        return None

    def is_commutative(self) -> bool:
        one = self.T.one
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                if self.mul_raw({i: one}, {j: one}) != self.mul_raw({j: one}, {i: one}):
                    return False
        return True

    def generators_for_center(self):
        """Elements whose centralizer is the center (the basis by default)."""
        if self.factors:
            out = []
            for k, f in enumerate(self.factors):
                out += [self.embed(k, g) for g in f.generators_for_center()]
            return out
        if "generators" in self.meta:
            return self.meta["generators"]
        return self.basis_elements()

    def center(self) -> "Subalgebra":
        return centralizer(self, self.generators_for_center())

    def is_central(self) -> bool:
        return len(self.center().basis) == 1

    def base_change(self, T2: FieldTower) -> "Algebra":
        if not T2.contains(self.T):
            raise FieldMismatch(f"{T2} does not contain {self.T}")
        table = {key: [(k, T2(c)) for k, c in v] for key, v in self._table.items()}
        A = Algebra(T2, self.labels, table, one={k: T2(c) for k, c in self._one.items()},
                    degree=self.degree,
                    basis_trd=None if self.basis_trd is None else [T2(c) for c in self.basis_trd],
                    name=self.name, check=False)
        A.meta = {k: v for k, v in self.meta.items() if k != "generators"}
        if "generators" in self.meta:
            A.meta["generators"] = [A.elem({i: T2(c) for i, c in g.c.items()}) for g in self.meta["generators"]]
        return A

    def degree_or_raise(self) -> int:
        if self.degree is not None:
            return self.degree
        d = isqrt(self.dim)
        if d * d != self.dim:
            raise NotCentralSimple(f"dimension {self.dim} is not a square and no degree was declared")
        return d

    def __repr__(self):
        return f"<{self.name} over {self.T}, dim {self.dim}>"


class TensorAlgebra(Algebra):
    """A1 (x) A2 (x) ... kept in factored form; basis products computed per factor."""

    def __init__(self, factors, name=None):
        factors = list(factors)
        T = factors[0].T
        for f in factors[1:]:
            if f.T.key != T.key:
                raise FieldMismatch(f"{f.T} differs from {T}")
        self.T = T
        self.factors = factors
        self.dims = [f.dim for f in factors]
        self.dim = 1
        for d in self.dims:
            self.dim *= d
        self.labels = None
        self.name = name or " ⊗ ".join(f.name for f in factors)
        degs = [f.degree for f in factors]
        self.degree = None if any(d is None for d in degs) else _prod(degs)
        self.meta = {}
        self._cache = {}
        if all(f.basis_trd is not None for f in factors):
            self.basis_trd = [
                _prod_scalars([f.basis_trd[i] for f, i in zip(factors, self.split(k))], T)
                for k in range(self.dim)
            ]
        else:
            self.basis_trd = None
        one = {}
        for combo in product(*[sorted(f._one.items()) for f in factors]):
            idx = self.join([k for k, _ in combo])
            one[idx] = _prod_scalars([c for _, c in combo], T)
        self._one = one
        self._table = None

    @property
    def labels(self):
        if self._labels is None:
            self._labels = [
                "⊗".join(f.labels[i] for f, i in zip(self.factors, self.split(k)))
                for k in range(self.dim)
            ]
        return self._labels

    @labels.setter
    def labels(self, v):
        self._labels = v

    def split(self, k: int):
        out = []
        for d in reversed(self.dims):
            k, r = divmod(k, d)
            out.append(r)
        return tuple(reversed(out))

    def join(self, idx) -> int:
        k = 0
        for d, i in zip(self.dims, idx):
            k = k * d + i
        return k

    def basis_product(self, i: int, j: int):
        key = (i, j)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        acc = {(): self.T.one}
        for f, a, b in zip(self.factors, self.split(i), self.split(j)):
            prod_ = f.basis_product(a, b)
            if not prod_:
                acc = {}
                break
            nxt = {}
            for idx, c in acc.items():
                for k, d in prod_:
                    nxt[idx + (k,)] = c * d
            acc = nxt
        res = tuple((self.join(idx), c) for idx, c in acc.items() if c)
        self._cache[key] = res
        return res

    def embed(self, k: int, x: "AlgebraElement") -> "AlgebraElement":
        """Image of x from factor k under a -> 1 (x) .. a .. (x) 1."""
        if x.parent is not self.factors[k]:
            raise ParentMismatch("element is not in the requested factor")
        parts = [sorted(f._one.items()) for f in self.factors]
        parts[k] = sorted(x.c.items())
        out = {}
        for combo in product(*parts):
            idx = self.join([i for i, _ in combo])
            out[idx] = _prod_scalars([c for _, c in combo], self.T)
        return AlgebraElement(self, {i: c for i, c in out.items() if c})

    def pure(self, elems) -> "AlgebraElement":
        """x_1 (x) x_2 (x) ... for one element per factor."""
        out = {}
        for combo in product(*[sorted(e.c.items()) for e in elems]):
            idx = self.join([i for i, _ in combo])
            out[idx] = _prod_scalars([c for _, c in combo], self.T)
        return AlgebraElement(self, {i: c for i, c in out.items() if c})

    def base_change(self, T2: FieldTower) -> "TensorAlgebra":
        return TensorAlgebra([f.base_change(T2) for f in self.factors], name=self.name)

    def densify(self) -> Algebra:
        if self.dim > 64:
            raise ValueError("dense tables are limited to dimension 64")
        table = {(i, j): list(self.basis_product(i, j)) for i in range(self.dim) for j in range(self.dim)}
        return Algebra(self.T, self.labels, table, one=self._one, degree=self.degree,
                       basis_trd=self.basis_trd, name=self.name, check=False)


def _prod(xs):
    n = 1
    for x in xs:
        n *= x
    return n


def _prod_scalars(xs, T):
    acc = T.one
    for x in xs:
        acc = acc * x
    return acc


class AlgebraElement:
    """Sparse coordinate vector with respect to the parent's basis."""

    __slots__ = ("parent", "c")

    def __init__(self, parent: Algebra, coords: dict):
        self.parent = parent
        self.c = coords

    def _check(self, o):
        if not isinstance(o, AlgebraElement):
            return False
        if o.parent is not self.parent:
            raise ParentMismatch(f"{o.parent.name} vs {self.parent.name}")
        return True

    def __add__(self, o):
        if not self._check(o):
            return self + self.parent.scalar(o)
        out = dict(self.c)
        for k, v in o.c.items():
            s = out.get(k)
            if s is None:
                out[k] = v
            else:
                s = s + v
                if s:
                    out[k] = s
                else:
                    del out[k]
        return AlgebraElement(self.parent, out)

    def __radd__(self, o):
        return self + o

    def __neg__(self):
        return AlgebraElement(self.parent, {k: -v for k, v in self.c.items()})

    def __sub__(self, o):
        if not self._check(o):
            o = self.parent.scalar(o)
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if self._check(o):
            return AlgebraElement(self.parent, self.parent.mul_raw(self.c, o.c))
        c = self.parent.T(o)
        if not c:
            return self.parent.zero()
        return AlgebraElement(self.parent, {k: v * c for k, v in self.c.items()})

    def __rmul__(self, o):
        c = self.parent.T(o)
        if not c:
            return self.parent.zero()
        return AlgebraElement(self.parent, {k: c * v for k, v in self.c.items()})

    def __truediv__(self, o):
        if isinstance(o, AlgebraElement):
            return self * inverse(o)
        return self * (self.parent.T.one / self.parent.T(o))

    def __pow__(self, k: int):
        if k < 0:
            return inverse(self) ** (-k)
        acc = self.parent.one()
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def __eq__(self, o):
        if not isinstance(o, AlgebraElement):
            o = self.parent.scalar(o)
        return self.parent is o.parent and self.c == o.c

    def __hash__(self):
        return hash(frozenset(self.c.items()))

    def __bool__(self):
        return bool(self.c)

    def vector(self):
        z = self.parent.T.zero
        return [self.c.get(k, z) for k in range(self.parent.dim)]

    def scalar_value(self):
        """c when self = c * 1, else None."""
        one = self.parent._one
        if not self.c:
            return self.parent.T.zero
        k0 = next(iter(one))
        if k0 not in self.c:
            return None
        c = self.c[k0] / one[k0]
        if self.c.keys() != one.keys():
            return None
        for k, v in one.items():
            if self.c[k] != c * v:
                return None
        return c

    def is_scalar(self) -> bool:
        return self.scalar_value() is not None

    def commutes_with(self, o) -> bool:
        return self * o == o * self

    def to_json(self):
        T = self.parent.T
        return {str(k): T.format(v) for k, v in sorted(self.c.items())}

    def __repr__(self):
        if not self.c:
            return "0"
        T = self.parent.T
        parts = []
        labels = self.parent.labels
        for k in sorted(self.c):
            v = self.c[k]
            s = T.format(v)
            if " " in s or "/" in s:
                s = f"({s})"
            lab = labels[k]
            if lab == "1":
                parts.append(s)
            elif s == "1":
                parts.append(lab)
            elif s == "-1":
                parts.append("-" + lab)
            else:
                parts.append(f"{s}*{lab}")
        return " + ".join(parts).replace("+ -", "- ")


# ---------------------------------------------------------------------------
# operations

def mul(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    if x.parent is not y.parent:
        raise ParentMismatch("factors live in different algebras")
    return x * y


def inverse(x: AlgebraElement) -> AlgebraElement:
    """y with xy = yx = 1; NotInvertible when x is a zero divisor."""
    A = x.parent
    if not x:
        raise NotInvertible("zero is not invertible")
    L = A.left_matrix(x)
    one = A.one().vector()
    sol = linalg.solve(L, one)
    if sol is None:
        raise NotInvertible(f"{x} is a zero divisor")
    y = A.from_vector(sol)
    if y * x != A.one():
        raise NotInvertible(f"{x} has a right inverse but no left inverse")
    return y


def is_invertible(x: AlgebraElement) -> bool:
    if not x:
        return False
    return linalg.rank(x.parent.left_matrix(x)) == x.parent.dim


def tensor(A1: Algebra, A2: Algebra, name=None) -> TensorAlgebra:
    if A1.T.key != A2.T.key:
        raise FieldMismatch(f"{A1.T} vs {A2.T}")
    return TensorAlgebra([A1, A2], name=name)


@dataclass
class Subalgebra:
    """A multiplicatively closed subspace containing 1."""

    parent: Algebra
    basis: list
    rows: list = field(repr=False, default=None)
    pivots: list = field(repr=False, default=None)
    closure: dict = field(repr=False, default=None)

    @classmethod
    def spanned_by(cls, parent: Algebra, elems, check=True):
        vecs = [e.vector() for e in elems if e]
        rows, pivots = linalg.row_space_basis(vecs) if vecs else ([], [])
        basis = [parent.from_vector(r) for r in rows]
        sub = cls(parent, basis, rows, pivots)
        if check:
            sub.verify()
        return sub

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coordinates(self, x: AlgebraElement):
        return linalg.coordinates(self.rows, self.pivots, x.vector())

    def contains(self, x: AlgebraElement) -> bool:
        return self.coordinates(x) is not None

    def verify(self):
        """Check unity membership and closure; stores the closure witness."""
        if not self.contains(self.parent.one()):
            raise ValueError("subspace does not contain 1")
        closure = {}
        for i, a in enumerate(self.basis):
            for j, b in enumerate(self.basis):
                co = self.coordinates(a * b)
                if co is None:
                    raise ValueError(f"subspace not closed: basis {i} * basis {j}")
                closure[(i, j)] = co
        self.closure = closure
        return True

    def as_algebra(self, name=None, degree=None) -> Algebra:
        if self.closure is None:
            self.verify()
        table = {(i, j): [(k, c) for k, c in enumerate(co) if c] for (i, j), co in self.closure.items()}
        one = self.coordinates(self.parent.one())
        labels = [f"b{k}" for k in range(self.dim)]
        return Algebra(self.parent.T, labels, table, one={k: c for k, c in enumerate(one) if c},
                       degree=degree, name=name or f"sub({self.parent.name})", check=False)

    def lift(self, coords) -> AlgebraElement:
        acc = self.parent.zero()
        for c, b in zip(coords, self.basis):
            if c:
                acc = acc + b * c
        return acc


def centralizer(A: Algebra, S) -> Subalgebra:
    """{x : xs = sx for all s in S}, with closure witness."""
    S = list(S)
    if not S:
        raise ValueError("centralizer needs a nonempty set")
    n = A.dim
    rows = []
    for s in S:
        L = A.left_matrix(s)
        R = A.right_matrix(s)
        # x s - s x = (R_s - L_s) x
        for k in range(n):
            row = [R[k][j] - L[k][j] for j in range(n)]
            if any(row):
                rows.append(row)
    if not rows:
        basis = A.basis_elements()
    else:
        basis = [A.from_vector(v) for v in linalg.nullspace(rows, n)]
    return Subalgebra.spanned_by(A, basis)


def reduced_trace(x: AlgebraElement):
    """Trd(x): from declared basis traces when present, else Tr(L_x)/deg."""
    A = x.parent
    if A.basis_trd is not None:
        acc = A.T.zero
        for k, c in x.c.items():
            t = A.basis_trd[k]
            if t:
                acc = acc + c * t
        return acc
    n = A.degree_or_raise()
    L = A.left_matrix(x)
    tr = A.T.zero
    for k in range(A.dim):
        tr = tr + L[k][k]
    if A.T.p and n % A.T.p == 0:
        raise NotCentralSimple("Tr(L_x)/deg is undefined when the characteristic divides the degree")
    return tr / A.T(n)


def left_ideal_dim(x: AlgebraElement) -> int:
    """dim_F of xA: rank of left multiplication by x."""
    return linalg.rank(x.parent.left_matrix(x))


def kernel_dim_left(x: AlgebraElement) -> int:
    A = x.parent
    return len(linalg.nullspace(A.left_matrix(x), A.dim)) if x else A.dim


def matrix_algebra(T: FieldTower, n: int, name=None) -> Algebra:
    """M_n(T) on matrix units E_ij (row-major index i*n+j)."""
    table = {}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                table[(i * n + j, j * n + k)] = [(i * n + k, 1)]
    labels = [f"E{i + 1}{j + 1}" if n < 10 else f"E{i + 1},{j + 1}" for i in range(n) for j in range(n)]
    one = {i * n + i: 1 for i in range(n)}
    trd = [1 if i == j else 0 for i in range(n) for j in range(n)]
    A = Algebra(T, labels, table, one=one, degree=n, basis_trd=trd,
                name=name or f"M{n}", check=False)
    A.meta["matrix_size"] = n
    return A


def matrix_element(A: Algebra, M) -> AlgebraElement:
    """Element of a matrix algebra from a list of rows."""
    n = A.meta["matrix_size"]
    return A.elem({i * n + j: M[i][j] for i in range(n) for j in range(n)})


def element_matrix(x: AlgebraElement):
    n = x.parent.meta["matrix_size"]
    z = x.parent.T.zero
    return [[x.c.get(i * n + j, z) for j in range(n)] for i in range(n)]


def diagonal(A: Algebra, entries) -> AlgebraElement:
    n = A.meta["matrix_size"]
    return A.elem({i * n + i: e for i, e in enumerate(entries)})


@dataclass
class IsomorphismReport:
    passed: bool
    reason: str = ""
    failing_pair: Optional[tuple] = None
    checked_pairs: int = 0

    def to_json(self):
        return {"pass": self.passed, "reason": self.reason,
                "failing_pair": list(self.failing_pair) if self.failing_pair else None,
                "checked_pairs": self.checked_pairs}


def verify_isomorphism(A1: Algebra, A2: Algebra, images) -> IsomorphismReport:
    """Check that e_i -> images[i] is an algebra isomorphism A1 -> A2.

    images is a list of A2 elements (one per A1 basis vector) or a callable.
    """
    if A1.dim != A2.dim:
        raise DimensionMismatch(f"dimensions {A1.dim} and {A2.dim} differ")
    if callable(images):
        images = [images(i) for i in range(A1.dim)]
    images = list(images)
    for im in images:
        if im.parent is not A2:
            raise ParentMismatch("image outside the target algebra")

    def phi(x: AlgebraElement) -> AlgebraElement:
        acc = A2.zero()
        for k, c in x.c.items():
            acc = acc + images[k] * c
        return acc

    if linalg.rank([im.vector() for im in images]) != A1.dim:
        return IsomorphismReport(False, "not bijective")
    if phi(A1.one()) != A2.one():
        return IsomorphismReport(False, "unity not preserved")
    checked = 0
    for i in range(A1.dim):
        for j in range(A1.dim):
            lhs = phi(A1.basis(i) * A1.basis(j))
            rhs = images[i] * images[j]
            checked += 1
            if lhs != rhs:
                return IsomorphismReport(False, "not multiplicative", (i, j), checked)
    return IsomorphismReport(True, "", None, checked)


def algebra_from_description(T: FieldTower, desc: dict, name=None) -> Algebra:
    """{"dim": n, "basis": [...], "sc": [[i, j, k, "scalar"], ...], "one"?: {...}}."""
    n = int(desc["dim"])
    labels = desc.get("basis") or [f"e{k}" for k in range(n)]
    if len(labels) != n:
        raise DimensionMismatch("basis label count differs from dim")
    table: dict = {}
    for entry in desc.get("sc", []):
        i, j, k, c = entry
        if not (0 <= i < n and 0 <= j < n and 0 <= k < n):
            raise IndexError(f"structure constant index out of range: {entry}")
        table.setdefault((int(i), int(j)), []).append((int(k), T(str(c))))
    merged = {}
    for key, terms in table.items():
        acc: dict = {}
        for k, c in terms:
            acc[k] = acc.get(k, T.zero) + c
        merged[key] = [(k, c) for k, c in acc.items() if c]
    one = desc.get("one")
    if one is not None:
        one = {int(k): T(str(v)) for k, v in one.items()}
    return Algebra(T, labels, merged, one=one, degree=desc.get("degree"), name=name)
