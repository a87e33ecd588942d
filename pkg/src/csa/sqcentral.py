"""Square-central elements: quaternion-subalgebra membership tests and witnesses.

g is square-central when g^2 is a nonzero scalar and g is not.  Two cases:
g^2 = lambda^2 a square (eigenspace dimensions decide), and g^2 = a a
nonsquare (the parity of deg/ind decides the split case).  The module
also carries a Laurent model of D (x) (t_1, t_2) for leading-term
arguments.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from typing import Optional

from . import linalg
from .algebra import (
    Algebra,
    AlgebraElement,
    Subalgebra,
    TensorAlgebra,
    diagonal,
    element_matrix,
    inverse,
    is_invertible,
    left_ideal_dim,
    matrix_element,
    reduced_trace,
)
from .errors import (
    BudgetExhausted,
    NotAWitness,
    NotSplitPresentation,
    NotSquareCentral,
    UnknownIndex,
    WrongCharacteristic,
)

IN = "InQuaternion"
NOT_IN = "NotInQuaternion"
UNKNOWN = "Unknown"


@dataclass
class SquareCentralReport:
    g: AlgebraElement
    case: str                          # "InSquare" or "NonSquare"
    value: object                      # lambda or a
    dims: Optional[tuple] = None       # (dim (g - lambda)A, dim (g + lambda)A)
    trace: object = None
    verdict: str = UNKNOWN
    reason: str = ""
    witness: Optional[AlgebraElement] = None
    split_verdict: Optional[str] = None
    notes: list = field(default_factory=list)

    def to_json(self):
        T = self.g.parent.T
        return {
            "g": self.g.to_json(),
            "case": self.case,
            "value": T.format(self.value),
            "dims": list(self.dims) if self.dims else None,
            "trace": None if self.trace is None else T.format(self.trace),
            "verdict": self.verdict,
            "split_verdict": self.split_verdict,
            "reason": self.reason,
            "witness": None if self.witness is None else self.witness.to_json(),
            "notes": self.notes,
        }


def square_value(g: AlgebraElement):
    """g^2 as a scalar; NotSquareCentral otherwise."""
    if g.is_scalar():
        raise NotSquareCentral("g is a scalar")
    c = (g * g).scalar_value()
    if c is None or not c:
        raise NotSquareCentral("g^2 is not a nonzero scalar")
    return c


def classify_square_central(A: Algebra, g: AlgebraElement) -> SquareCentralReport:
    c = square_value(g)
    lam = A.T.nth_root(c, 2)
    if lam is not None:
        return SquareCentralReport(g, "InSquare", lam)
    return SquareCentralReport(g, "NonSquare", c)


def verify_quaternion_witness(g: AlgebraElement, f: AlgebraElement) -> bool:
    """g^2, f^2 nonzero scalars, gf = -fg, and <g, f> of dimension 4."""
    if (g * g).scalar_value() in (None, 0) or (f * f).scalar_value() in (None, 0):
        return False
    if g * f != -(f * g):
        return False
    A = g.parent
    return linalg.rank([x.vector() for x in (A.one(), g, f, g * f)]) == 4


def quaternion_subalgebra(g: AlgebraElement, f: AlgebraElement) -> Subalgebra:
    A = g.parent
    return Subalgebra.spanned_by(A, [A.one(), g, f, g * f])


# ---------------------------------------------------------------------------
# g^2 a square

def _block_swap_witness(A: Algebra, g: AlgebraElement, lam):
    """f = P (0 1; 1 0) P^-1 with P the eigenbasis of g (V_+ then V_-)."""
    n = A.meta["matrix_size"]
    T = A.T
    half = T.one / T(2)
    G = element_matrix(g)
    cols = []
    for sign in (1, -1):
        # columns of (1 + sign lambda^-1 g) / 2 span the eigenspace
        P = [[half * ((T.one if i == j else T.zero) + G[i][j] * (T(sign) / lam)) for j in range(n)] for i in range(n)]
        rows, _ = linalg.rref(linalg.transpose(P))
        cols.append(rows)
    vp, vm = cols
    if len(vp) != len(vm):
        return None
    basis = vp + vm
    Pm = linalg.transpose(basis)
    r = len(vp)
    S = [[T.zero] * n for _ in range(n)]
    for k in range(r):
        S[k][r + k] = T.one
        S[r + k][k] = T.one
    P_el = matrix_element(A, Pm)
    return P_el * matrix_element(A, S) * inverse(P_el)


def membership_square_case(A: Algebra, g: AlgebraElement, lam=None) -> SquareCentralReport:
    """g lies in a quaternion subalgebra iff dim (g - lambda)A = dim (g + lambda)A."""
    T = A.T
    if T.p == 2:
        raise WrongCharacteristic("the eigenspace projections need characteristic != 2")
    rep = classify_square_central(A, g)
    if rep.case != "InSquare":
        raise NotSquareCentral("g^2 is not a square in F")
    if lam is None:
        lam = rep.value
    if g * g != A.scalar(lam * lam):
        raise NotSquareCentral("g^2 != lambda^2")
    rep.value = lam
    dm = left_ideal_dim(g - A.scalar(lam))
    dp = left_ideal_dim(g + A.scalar(lam))
    rep.dims = (dm, dp)
    try:
        rep.trace = reduced_trace(g)
    except Exception as exc:  # trace undefined for this presentation
        rep.notes.append(f"trace unavailable: {exc}")
    if dm != dp:
        rep.verdict = NOT_IN
        rep.reason = f"dim (g-λ)A = {dm} != dim (g+λ)A = {dp}"
        return rep
    rep.verdict = IN
    if "matrix_size" in A.meta:
        f = _block_swap_witness(A, g, lam)
        if f is None or not verify_quaternion_witness(g, f):
            raise AssertionError("block-swap witness failed its relations")
        rep.witness = f
    else:
        rep.notes.append("witness needs a split presentation; verdict from dimensions only")
    return rep


def square_case_witness_or_raise(A: Algebra, g: AlgebraElement, lam=None):
    rep = membership_square_case(A, g, lam)
    if rep.verdict == IN and rep.witness is None:
        raise NotSplitPresentation("A is not given as a matrix algebra")
    return rep


def trace_criterion_char0(A: Algebra, g: AlgebraElement, lam=None) -> SquareCentralReport:
    """Characteristic 0: g lies in a quaternion subalgebra iff Trd(g) = 0."""
    if A.T.p:
        raise WrongCharacteristic("the trace criterion only holds in characteristic 0")
    rep = classify_square_central(A, g)
    if rep.case != "InSquare":
        raise NotSquareCentral("g^2 is not a square in F")
    if lam is not None:
        rep.value = lam
    rep.trace = reduced_trace(g)
    rep.verdict = IN if not rep.trace else NOT_IN
    rep.reason = f"Trd(g) = {A.T.format(rep.trace)}"
    return rep


# ---------------------------------------------------------------------------
# g^2 a nonsquare

def index_of(A: Algebra):
    """Index when derivable from the presentation, else None."""
    if "index" in A.meta:
        return A.meta["index"]
    if "matrix_size" in A.meta:
        return 1
    if "symbol" in A.meta and A.meta["symbol"]["n"] == 2:
        from .symbols import quaternion_division_status

        status, _ = quaternion_division_status(A)
        return {"division": 2, "split": 1}.get(status)
    if A.factors:
        inds = [index_of(f) for f in A.factors]
        nonsplit = [i for i in inds if i != 1]
        if all(i is not None for i in inds) and len(nonsplit) <= 1:
            return nonsplit[0] if nonsplit else 1
    return None


def _matrix_factor(A: Algebra):
    """(k, n) when A = M_n(F) (x) A' with factor k a matrix algebra, else None."""
    if "matrix_size" in A.meta:
        return None, A.meta["matrix_size"]
    if A.factors:
        for k, f in enumerate(A.factors):
            if "matrix_size" in f.meta and f.meta["matrix_size"] % 2 == 0:
                return k, f.meta["matrix_size"]
    return None


def _conjugator(A: Algebra, g: AlgebraElement, h: AlgebraElement, height: int = 2, budget: int = 500):
    """Invertible u with u g = h u, from small combinations of the solution space."""
    from .crossed import _small_combinations

    n = A.dim
    R = A.right_matrix(g)
    L = A.left_matrix(h)
    rows = [[R[k][l] - L[k][l] for l in range(n)] for k in range(n)]
    rows = [r for r in rows if any(r)]
    basis = [A.from_vector(v) for v in linalg.nullspace(rows, n)] if rows else A.basis_elements()
    for count, cs in enumerate(_small_combinations(len(basis), height)):
        if count >= budget:
            return None
        u = A.zero()
        for c, b in zip(cs, basis):
            if c:
                u = u + b * c
        if u and is_invertible(u):
            return u
    return None


def membership_nonsquare_case(A: Algebra, g: AlgebraElement, index=None) -> SquareCentralReport:
    """g lies in a split quaternion subalgebra iff deg A / ind A is even."""
    rep = classify_square_central(A, g)
    if rep.case != "NonSquare":
        raise NotSquareCentral("g^2 is a square in F")
    a = rep.value
    ind = index if index is not None else index_of(A)
    if ind is None:
        raise UnknownIndex("index of A is not derivable from its presentation")
    deg = A.degree_or_raise()
    if (deg // ind) % 2:
        rep.verdict = NOT_IN
        rep.split_verdict = NOT_IN
        rep.reason = f"deg/ind = {deg // ind} is odd: no split quaternion subalgebra contains g"
        return rep
    rep.verdict = IN
    rep.split_verdict = IN
    rep.reason = f"deg/ind = {deg // ind} is even"
    mf = _matrix_factor(A)
    if mf is None:
        rep.notes.append("no M_2 factor in the presentation; witness not constructed")
        return rep
    k, n = mf
    T = A.T
    # g' = (0 1; a 0) in the first 2x2 block, repeated down the diagonal
    rows = [[T.zero] * n for _ in range(n)]
    frows = [[T.zero] * n for _ in range(n)]
    for b in range(0, n, 2):
        rows[b][b + 1] = T.one
        rows[b + 1][b] = a
        frows[b][b] = T.one
        frows[b + 1][b + 1] = -T.one
    if k is None:
        gp, fp = matrix_element(A, rows), matrix_element(A, frows)
    else:
        gp = A.embed(k, matrix_element(A.factors[k], rows))
        fp = A.embed(k, matrix_element(A.factors[k], frows))
    rep.notes.append(f"g' = {gp} satisfies g'^2 = {T.format(a)}")
    u = _conjugator(A, g, gp)
    if u is None:
        rep.notes.append("g and g' are conjugate (Skolem-Noether); no small conjugator found")
        return rep
    f = inverse(u) * fp * u
    if not verify_quaternion_witness(g, f):
        raise AssertionError("conjugated witness failed its relations")
    rep.witness = f
    return rep


# ---------------------------------------------------------------------------
# anticommuting search

def anticommuting_space(A: Algebra, x: AlgebraElement):
    """Basis of {y : xy + yx = 0}."""
    n = A.dim
    L = A.left_matrix(x)
    R = A.right_matrix(x)
    rows = [[L[k][l] + R[k][l] for l in range(n)] for k in range(n)]
    rows = [r for r in rows if any(r)]
    if not rows:
        return A.basis_elements()
    return [A.from_vector(v) for v in linalg.nullspace(rows, n)]


def _height_vectors(d: int, height: int):
    """Integer vectors in [-height, height]^d by increasing max-norm (nonzero, first nonzero positive)."""
    for h in range(1, height + 1):
        for v in product(range(-h, h + 1), repeat=d):
            if max(abs(c) for c in v) != h:
                continue
            first = next(c for c in v if c)
            if first > 0:
                yield v


def find_anticommuting_square_central(A: Algebra, x: AlgebraElement, budget: int = 20000,
                                      height: int = 3) -> Optional[AlgebraElement]:
    """y with xy = -yx and y^2 a nonzero scalar.

    Over a finite prime field the whole space is enumerated when it fits in
    the budget (None then means no such y exists).  Otherwise a
    height-bounded search runs; BudgetExhausted signals incompleteness.
    """
    square_value(x)
    T = A.T
    W = anticommuting_space(A, x)
    d = len(W)
    finite = T.p and not T.nvars and T.K.degree == 1
    # single basis vectors first
    for y in W:
        s = (y * y).scalar_value()
        if s is not None and s:
            return y
    if finite and T.p ** d <= budget:
        for cs in product(range(T.p), repeat=d):
            if not any(cs):
                continue
            y = A.zero()
            for c, w in zip(cs, W):
                if c:
                    y = y + w * c
            s = (y * y).scalar_value()
            if s is not None and s:
                return y
        return None
    tried = 0
    for cs in _height_vectors(d, height):
        tried += 1
        if tried > budget:
            break
        y = A.zero()
        for c, w in zip(cs, W):
            if c:
                y = y + w * c
        s = (y * y).scalar_value()
        if s is not None and s:
            return y
    raise BudgetExhausted(f"no anticommuting square-central element among {min(tried, budget)} candidates")


def analyze(A: Algebra, g: AlgebraElement, budget: int = 20000, index=None) -> SquareCentralReport:
    """Full analysis combining the criteria that apply."""
    rep = classify_square_central(A, g)
    if rep.case == "InSquare":
        rep = membership_square_case(A, g)
        if A.T.p == 0:
            tr = trace_criterion_char0(A, g)
            rep.notes.append(f"trace criterion: {tr.verdict} ({'agrees' if tr.verdict == rep.verdict else 'DISAGREES'})")
        return rep
    try:
        rep = membership_nonsquare_case(A, g, index)
    except UnknownIndex as exc:
        rep.notes.append(str(exc))
    try:
        y = find_anticommuting_square_central(A, g, budget)
    except BudgetExhausted as exc:
        if rep.verdict != IN:
            rep.verdict = UNKNOWN
            rep.reason = str(exc)
        return rep
    if y is None:
        rep.verdict = NOT_IN
        rep.reason = "exhaustive search: no anticommuting square-central element"
        return rep
    rep.verdict = IN
    if rep.witness is None:
        rep.witness = y
    return rep


# ---------------------------------------------------------------------------
# D (x) (t1, t2): finitely supported Laurent polynomials in i, j over D

class LaurentQuaternion:
    """sum d_{al,be} i^al j^be with i^2 = t1, j^2 = t2, ij = -ji, d in D commuting with i, j."""

    __slots__ = ("D", "terms")

    def __init__(self, D: Algebra, terms=None):
        self.D = D
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def const(cls, D: Algebra, d: AlgebraElement):
        return cls(D, {(0, 0): d})

    @classmethod
    def scalar(cls, D: Algebra, c, al: int = 0, be: int = 0):
        return cls(D, {(al, be): D.scalar(c)})

    @classmethod
    def monomial(cls, D: Algebra, d: AlgebraElement, al: int, be: int):
        return cls(D, {(al, be): d})

    def __add__(self, o):
        out = dict(self.terms)
        for k, v in o.terms.items():
            out[k] = out[k] + v if k in out else v
        return LaurentQuaternion(self.D, out)

    def __neg__(self):
        return LaurentQuaternion(self.D, {k: -v for k, v in self.terms.items()})

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        if not isinstance(o, LaurentQuaternion):
            return LaurentQuaternion(self.D, {k: v * o for k, v in self.terms.items()})
        out = {}
        for (a, b), d in self.terms.items():
            for (c, e), f in o.terms.items():
                # j^b i^c = (-1)^{bc} i^c j^b
                v = d * f
                if (b * c) % 2:
                    v = -v
                k = (a + c, b + e)
                out[k] = out[k] + v if k in out else v
        return LaurentQuaternion(self.D, out)

    def __eq__(self, o):
        return isinstance(o, LaurentQuaternion) and self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (a, b), d in sorted(self.terms.items(), key=lambda kv: (kv[0][1], kv[0][0])):
            mono = "*".join(s for s in (f"i^{a}" if a else "", f"j^{b}" if b else "") if s)
            parts.append(f"({d})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    def valuation(self):
        """min (al/2, be/2), right-to-left lex, as the integer pair (al, be)."""
        if not self.terms:
            raise ValueError("valuation of zero")
        return min(self.terms, key=lambda k: (k[1], k[0]))

    def leading(self) -> "LaurentQuaternion":
        k = self.valuation()
        return LaurentQuaternion(self.D, {k: self.terms[k]})

    def in_center_field(self) -> bool:
        """Lies in L = F((t1))((t2)): even exponents and scalar coefficients."""
        return all(a % 2 == 0 and b % 2 == 0 and d.is_scalar() for (a, b), d in self.terms.items())

    def in_D(self) -> bool:
        return set(self.terms) <= {(0, 0)}


def random_laurent(D: Algebra, rng: random.Random, terms: int = 3, span: int = 2, height: int = 2):
    out = {}
    for _ in range(terms):
        k = (rng.randint(-span, span), rng.randint(-span, span))
        d = D.elem({m: rng.randint(-height, height) for m in range(D.dim)})
        if d:
            out[k] = out[k] + d if k in out else d
    return LaurentQuaternion(D, out)


def random_center_element(D: Algebra, rng: random.Random, terms: int = 2, span: int = 2, height: int = 3):
    out = {}
    for _ in range(terms):
        k = (2 * rng.randint(-span, span), 2 * rng.randint(-span, span))
        c = rng.randint(-height, height)
        if c:
            out[k] = out[k] + D.scalar(c) if k in out else D.scalar(c)
    return LaurentQuaternion(D, out)


def laurent_obstruction_reduce(D: Algebra, x: AlgebraElement, y: LaurentQuaternion) -> AlgebraElement:
    """From y with y^2 in L and xy = -yx, the coefficient d of l(y): d^2 in F, xd = -dx."""
    square_value(x)
    if not y:
        raise NotAWitness("y is zero")
    X = LaurentQuaternion.const(D, x)
    if not (y * y).in_center_field() or not (y * y):
        raise NotAWitness("y^2 is not in L")
    if X * y != -(y * X):
        raise NotAWitness("y does not anticommute with x")
    al, be = y.valuation()
    d = y.terms[(al, be)]
    s = (d * d).scalar_value()
    if s is None or not s:
        raise AssertionError("leading coefficient is not square-central")
    if x * d != -(d * x):
        raise AssertionError("leading coefficient does not anticommute with x")
    return d
