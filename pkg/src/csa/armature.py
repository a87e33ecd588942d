"""Armatures: abelian subgroups of A^x/F^x of order dim A whose representatives span A.

The commutator pairing <a, b> = x_a x_b x_a^-1 x_b^-1 is stored as a table
of discrete logarithms on generators, base the tower's canonical root of
unity, and extended bimultiplicatively.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from math import gcd, lcm
from typing import Optional

from sympy import factorint

from . import linalg
from .abelian import AbelianGroup
from .algebra import Algebra, AlgebraElement, IsomorphismReport, TensorAlgebra, verify_isomorphism
from .errors import DegenerateForm, DegenerateRadical, NotIndependent, NotIsotropic, NotScalar

TABLE_LIMIT = 256


def proportionality(u: AlgebraElement, v: AlgebraElement):
    """lambda with u = lambda * v, or None."""
    if not v:
        return None
    k0 = min(v.c)
    if k0 not in u.c:
        return None
    lam = u.c[k0] / v.c[k0]
    if u.c.keys() != v.c.keys():
        return None
    for k, c in v.c.items():
        if u.c[k] != lam * c:
            return None
    return lam


def commutator_scalar(x: AlgebraElement, y: AlgebraElement):
    """x y x^-1 y^-1 as a scalar, via x y = lambda y x."""
    lam = proportionality(x * y, y * x)
    if lam is None:
        raise NotScalar("commutator is not a scalar")
    return lam


def class_key(x: AlgebraElement):
    """Key of the class x F^x: coordinates scaled so the first one is 1."""
    if not x:
        return None
    k0 = min(x.c)
    c0 = x.c[k0]
    return frozenset((k, v / c0) for k, v in x.c.items())


class Armature:
    """Subgroup of A^x/F^x generated by classes of gens, with gens[k] of order orders[k]."""

    def __init__(self, parent: Algebra, gens, orders, name=None):
        self.parent = parent
        self.T = parent.T
        self.gens = list(gens)
        self.orders = [int(o) for o in orders]
        if len(self.gens) != len(self.orders):
            raise ValueError("one order per generator")
        self.group = AbelianGroup(self.orders)
        self.name = name or "armature"
        self._reps = {}
        self._gen_logs = None
        self._keys = None
        self._mu = None
        self.recorded_symplectic = None

    def __repr__(self):
        return f"<Armature {self.name} of {self.parent.name}, orders {self.orders}>"

    @property
    def order(self) -> int:
        return self.group.order

    @property
    def exponent(self) -> int:
        return self.group.exponent

    def elements(self):
        return self.group.elements()

    def rep(self, e) -> AlgebraElement:
        """x_e = prod_k gens[k]^{e_k} (ordered product)."""
        e = self.group.norm(e)
        r = self._reps.get(e)
        if r is None:
            r = self.parent.one()
            for g, k in zip(self.gens, e):
                if k:
                    r = r * g ** k
            self._reps[e] = r
        return r

    # -- roots of unity ----------------------------------------------------
    def _mu_table(self):
        if self._mu is None:
            E = self.exponent
            m = max(d for d in range(1, E + 1) if E % d == 0 and self.T.K.has_zeta(d))
            z = self.T.zeta(m)
            table = {}
            acc = self.T.one
            for k in range(m):
                table[acc] = k * (E // m)
                acc = acc * z
            self._mu = (m, z, table)
        return self._mu

    def log(self, value) -> int:
        """k mod E with value = zeta_E^k."""
        _, _, table = self._mu_table()
        k = table.get(value)
        if k is None:
            raise NotScalar(f"{self.T.format(value)} is not an E-th root of unity in the base")
        return k

    def root(self, k: int):
        """zeta_E^k."""
        E = self.exponent
        m, z, _ = self._mu_table()
        if (k * m) % E:
            raise ValueError("root of unity outside the base field")
        return z ** ((k * m // E) % m) if m > 1 else self.T.one

    # -- pairing -----------------------------------------------------------
    def generator_logs(self):
        if self._gen_logs is None:
            n = len(self.gens)
            L = [[0] * n for _ in range(n)]
            for a in range(n):
                for b in range(a + 1, n):
                    k = self.log(commutator_scalar(self.gens[a], self.gens[b]))
                    L[a][b] = k
                    L[b][a] = (-k) % self.exponent
            self._gen_logs = L
        return self._gen_logs

    def pairing_log(self, a, b) -> int:
        L = self.generator_logs()
        E = self.exponent
        s = 0
        for k, ak in enumerate(a):
            if ak:
                row = L[k]
                for l, bl in enumerate(b):
                    if bl:
                        s += ak * bl * row[l]
        return s % E

    def pairing(self, a, b):
        """<a, b> from the generator table."""
        return self.root(self.pairing_log(a, b))

    def pairing_direct(self, a, b):
        """<a, b> computed from the representatives."""
        return commutator_scalar(self.rep(a), self.rep(b))

    def pairing_table(self):
        """Generator pairing values as formatted strings."""
        n = len(self.gens)
        return [[self.T.format(self.root(self.generator_logs()[a][b])) for b in range(n)] for a in range(n)]

    # -- classes -----------------------------------------------------------
    def class_table(self):
        if self._keys is None:
            if self.order > TABLE_LIMIT:
                raise ValueError("class table only materialized up to order 256")
            self._keys = {class_key(self.rep(e)): e for e in self.elements()}
        return self._keys

    def class_of(self, x: AlgebraElement):
        """Exponent tuple e with x in F^x x_e, or None."""
        return self.class_table().get(class_key(x))

    # -- subgroups ---------------------------------------------------------
    def orthogonal(self, H):
        """Elements a with <a, h> = 1 for all h in H (as exponent tuples)."""
        H = [self.group.norm(h) for h in H]
        return [a for a in self.elements() if all(self.pairing_log(a, h) == 0 for h in H)]

    def radical(self):
        basis = [tuple(1 if k == i else 0 for k in range(len(self.gens))) for i in range(len(self.gens))]
        return self.orthogonal(basis)

    def subarmature(self, vectors, name=None) -> "Armature":
        base = self.group.subgroup_base(vectors)
        sub = Armature(self.parent, [self.rep(v) for v, _ in base], [o for _, o in base], name=name)
        sub.embedding = [v for v, _ in base]
        return sub

    def is_nondegenerate(self) -> bool:
        return len(self.radical()) == 1


# ---------------------------------------------------------------------------
# verification

@dataclass
class ArmatureReport:
    passed: bool
    failed_axiom: Optional[str] = None
    detail: str = ""
    checks: dict = field(default_factory=dict)

    def to_json(self):
        return {"pass": self.passed, "failed_axiom": self.failed_axiom, "detail": self.detail,
                "checks": self.checks}


def verify_armature(A: Algebra, arm: Armature) -> ArmatureReport:
    """Check the armature axioms; the first failure is reported."""
    checks = {}
    if arm.parent is not A:
        return ArmatureReport(False, "parent", "armature lives in a different algebra")
    for k, (g, o) in enumerate(zip(arm.gens, arm.orders)):
        if (g ** o).scalar_value() is None or not (g ** o).scalar_value():
            return ArmatureReport(False, "generator_order", f"generator {k} to the power {o} is not a nonzero scalar")
    checks["generator_orders"] = True
    try:
        arm.generator_logs()
    except NotScalar as exc:
        return ArmatureReport(False, "abelian", str(exc))
    checks["abelian"] = True
    if arm.order != A.dim:
        return ArmatureReport(False, "order", f"|A| = {arm.order} but dim = {A.dim}", checks)
    checks["order"] = True
    if arm.order <= TABLE_LIMIT:
        vecs = [arm.rep(e).vector() for e in arm.elements()]
        if linalg.rank(vecs) != arm.order:
            return ArmatureReport(False, "spanning", "representatives are linearly dependent", checks)
        checks["independent"] = True
        # pairing from the generator table agrees with direct commutators
        elems = arm.elements()
        probe = elems if arm.order <= 16 else elems[: 16]
        gens = [tuple(1 if k == i else 0 for k in range(len(arm.gens))) for i in range(len(arm.gens))]
        for a in probe:
            for b in (elems if arm.order <= 16 else gens):
                if arm.pairing_direct(a, b) != arm.pairing(a, b):
                    return ArmatureReport(False, "bimultiplicative", f"pairing mismatch at {a}, {b}", checks)
        checks["pairing_consistent"] = True
    else:
        # nondegenerate abelian groups mod scalars have independent representatives
        if not arm.is_nondegenerate():
            return ArmatureReport(False, "spanning", "degenerate pairing above the table limit", checks)
        checks["independent"] = "via nondegeneracy"
    return ArmatureReport(True, None, "", checks)


# ---------------------------------------------------------------------------
# symplectic bases over F_p

def _form(G, u, v, p):
    s = 0
    for i, ui in enumerate(u):
        if ui:
            row = G[i]
            for j, vj in enumerate(v):
                if vj:
                    s += ui * row[j] * vj
    return s % p


def _rank_mod(rows, p):
    M = [[x % p for x in r] for r in rows]
    rank = 0
    ncols = len(M[0]) if M else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = pow(M[rank][c], -1, p)
        M[rank] = [(x * inv) % p for x in M[rank]]
        for i in range(len(M)):
            if i != rank and M[i][c]:
                f = M[i][c]
                M[i] = [(x - f * y) % p for x, y in zip(M[i], M[rank])]
        rank += 1
    return rank


def _nullspace_mod(rows, n, p):
    M = [[x % p for x in r] for r in rows]
    pivots = []
    rank = 0
    for c in range(n):
        piv = next((i for i in range(rank, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = pow(M[rank][c], -1, p)
        M[rank] = [(x * inv) % p for x in M[rank]]
        for i in range(len(M)):
            if i != rank and M[i][c]:
                f = M[i][c]
                M[i] = [(x - f * y) % p for x, y in zip(M[i], M[rank])]
        pivots.append(c)
        rank += 1
    out = []
    for f in range(n):
        if f in pivots:
            continue
        v = [0] * n
        v[f] = 1
        for k, c in enumerate(pivots):
            v[c] = (-M[k][f]) % p
        out.append(tuple(v))
    return out


ENUMERATION_LIMIT = 4096


@lru_cache(maxsize=None)
def _all_vectors(n, p):
    return tuple(v for v in product(range(p), repeat=n) if any(v))


def _functional(G, c, p):
    """w with <v, c> = w . v."""
    return tuple(sum(G[i][j] * c[j] for j in range(len(c))) % p for i in range(len(G)))


def _candidates(n, p, constraints, G):
    """Vectors v with <v, c> = 0 for all c, in the fixed enumeration order of F_p^n."""
    rows = [_functional(G, c, p) for c in constraints]
    if p ** n <= ENUMERATION_LIMIT:
        for v in _all_vectors(n, p):
            if all(sum(a * b for a, b in zip(w, v)) % p == 0 for w in rows):
                yield v
    else:
        basis = _nullspace_mod(rows, n, p) if rows else [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
        yield from basis


TABLE_SPACE_LIMIT = 729


@dataclass(frozen=True)
class _PairingSpace:
    vecs: tuple
    index: dict
    table: list     # table[b][a] = <v_a, v_b>
    orth: list      # bitmask of the a with <v_a, v_b> = 0
    nondegenerate: bool
    scaled: list    # scaled[f][t] = v_f / (-t)


@lru_cache(maxsize=64)
def _pairing_space(p, G) -> _PairingSpace:
    n = len(G)
    vecs = _all_vectors(n, p)
    table = [_row_values(_functional(G, v, p), p) for v in vecs]
    orth = [int("".join("1" if x == 0 else "0" for x in reversed(row)), 2) for row in table]
    full = (1 << len(vecs)) - 1
    # v_f rescaled so that <v_e, v_f> = 1, keyed by table[e][f] = <v_f, v_e> = -<v_e, v_f>
    scaled = [[None] + [tuple(pow(-t % p, -1, p) * x % p for x in v) for t in range(1, p)] for v in vecs]
    return _PairingSpace(vecs, {v: k for k, v in enumerate(vecs)}, table, orth,
                         all(m != full for m in orth), scaled)


def _row_values(w, p):
    """w . v mod p for the nonzero v of F_p^n in enumeration order."""
    vals = [0]
    for wi in w:
        vals = [(x + c * wi) % p for x in vals for c in range(p)]
    return vals[1:]


@lru_cache(maxsize=None)
def _lines(n, p):
    """Bitmask of the nonzero multiples of each enumerated vector."""
    vecs = _all_vectors(n, p)
    index = {v: k for k, v in enumerate(vecs)}
    return [sum(1 << index[tuple(c * x % p for x in v)] for c in range(1, p)) for v in vecs]


def _independent_small(sp, idx, p):
    n = len(sp.vecs[0])
    lines = _lines(n, p)
    span = 0
    for k, a in enumerate(idx):
        if span >> a & 1:
            return False
        if k + 1 < len(idx):
            grown = span | lines[a]
            for c in range(1, p):
                cv = tuple(c * x % p for x in sp.vecs[a])
                m = span
                while m:
                    b = _lowest(m)
                    m &= m - 1
                    grown |= 1 << sp.index[tuple((x + y) % p for x, y in zip(sp.vecs[b], cv))]
            span = grown
    return True


def _lowest(mask):
    return (mask & -mask).bit_length() - 1


def _extend_tabulated(sp: _PairingSpace, p, n, todo):
    avail = (1 << len(sp.vecs)) - 1
    vecs, orth, table, scaled = sp.vecs, sp.orth, sp.table, sp.scaled
    pairs = []
    k = 0
    while 2 * len(pairs) < n:
        if k < len(todo):
            e = todo[k]
            k += 1
        else:
            e = _lowest(avail)
        mask = avail & ~orth[e]
        for c in todo[k:]:
            mask &= orth[c]
        if not mask:
            raise DegenerateForm("no partner found")
        f = (mask & -mask).bit_length() - 1
        pairs.append((vecs[e], scaled[f][table[e][f]]))
        # scaling f keeps its orthogonal complement
        avail &= orth[e] & orth[f]
    return pairs


@lru_cache(maxsize=64)
def _checked_form(p, G):
    """Reject non-alternating or degenerate G; the tabulated space when it is small."""
    G = tuple(tuple(x % p for x in row) for row in G)
    n = len(G)
    for i in range(n):
        if G[i][i]:
            raise DegenerateForm("form is not alternating")
        for j in range(i + 1, n):
            if (G[i][j] + G[j][i]) % p:
                raise DegenerateForm("form is not alternating")
    if n % 2:
        raise DegenerateForm("form is degenerate")
    if n and p ** n <= TABLE_SPACE_LIMIT:
        sp = _pairing_space(p, G)
        if not sp.nondegenerate:
            raise DegenerateForm("form is degenerate")
        return sp
    if n and _rank_mod(G, p) != n:
        raise DegenerateForm("form is degenerate")
    return None


def symplectic_extend(p: int, G, E=()):
    """Symplectic base (e_1, f_1), ... of (F_p^n, G) whose e-prefix is E.

    G is the Gram matrix of an alternating form (integers mod p).  Each
    step takes e_1 (the next input vector, or the first vector of the
    current complement), picks the first f_1 orthogonal to the remaining
    inputs with <e_1, f_1> != 0, rescales so that <e_1, f_1> = 1 and passes
    to the orthogonal complement of span(e_1, f_1).
    """
    n = len(G)
    G = tuple(map(tuple, G))
    sp = _checked_form(p, G)
    if sp is not None:
        idx = [sp.index.get(tuple(e)) for e in E]
        if None in idx:
            idx = [sp.index.get(tuple(x % p for x in e)) for e in E]
        if None in idx or (idx and not _independent_small(sp, idx, p)):
            raise NotIndependent("input vectors are linearly dependent")
        for a in range(len(idx)):
            row = sp.table[idx[a]]
            for b in range(a + 1, len(idx)):
                if row[idx[b]]:
                    raise NotIsotropic(f"inputs {a} and {b} are not orthogonal")
        return _extend_tabulated(sp, p, n, idx)
    G = tuple(tuple(x % p for x in row) for row in G)
    E = [tuple(x % p for x in e) for e in E]
    if E and _rank_mod(E, p) != len(E):
        raise NotIndependent("input vectors are linearly dependent")
    for a in range(len(E)):
        for b in range(a + 1, len(E)):
            if _form(G, E[a], E[b], p):
                raise NotIsotropic(f"inputs {a} and {b} are not orthogonal")
    pairs = []
    remaining = list(E)
    while 2 * len(pairs) < n:
        done = [v for pr in pairs for v in pr]
        if remaining:
            e = remaining.pop(0)
        else:
            e = next(_candidates(n, p, done, G))
        f = None
        we = _functional(G, e, p)
        for v in _candidates(n, p, done + remaining, G):
            if sum(a * b for a, b in zip(we, v)) % p:
                f = v
                break
        if f is None:
            raise DegenerateForm("no partner found")
        s = pow(_form(G, e, f, p), -1, p)
        f = tuple((s * x) % p for x in f)
        pairs.append((e, f))
    return pairs


def gram_matrix(p, vectors, G):
    return [[_form(G, u, v, p) for v in vectors] for u in vectors]


def is_standard_symplectic(p, pairs, G) -> bool:
    flat = [v for pr in pairs for v in pr]
    M = gram_matrix(p, flat, G)
    for a in range(len(flat)):
        for b in range(len(flat)):
            want = 0
            if a % 2 == 0 and b == a + 1:
                want = 1
            elif b % 2 == 0 and a == b + 1:
                want = p - 1
            if M[a][b] != want % p:
                return False
    return True


# ---------------------------------------------------------------------------
# symplectic bases of armatures

@dataclass
class SymplecticBase:
    pairs: list           # [(g, h)] exponent tuples
    orders: list
    logs: list            # log of <g, h> base zeta_E
    values: list          # <g, h> as tower scalars

    def to_json(self, T=None):
        return [{"g": list(g), "h": list(h), "order": o,
                 "value": T.format(v) if T is not None else str(v)}
                for (g, h), o, v in zip(self.pairs, self.orders, self.values)]


def _primary_pairs(arm: Armature, p: int):
    """Greedy symplectic pairs of the p-primary part (maximal orders first)."""
    grp = arm.group
    E = arm.exponent
    k = 0
    while E % p ** (k + 1) == 0:
        k += 1
    cof = E // p ** k
    elems = sorted(grp.span([grp.mul(cof, tuple(1 if j == i else 0 for j in range(grp.rank)))
                             for i in range(grp.rank)]))
    pairs = []
    rest = elems
    while len(rest) > 1:
        a = max(rest, key=lambda x: (grp.element_order(x), [-c for c in x]))
        oa = grp.element_order(a)
        b = None
        for x in rest:
            lg = arm.pairing_log(a, x)
            if E // gcd(lg, E) == oa:
                b = x
                break
        if b is None:
            raise DegenerateRadical("pairing degenerate on the primary part")
        pairs.append((a, b, oa))
        rest = [x for x in rest if arm.pairing_log(x, a) == 0 and arm.pairing_log(x, b) == 0]
    return pairs


def symplectic_base(arm: Armature) -> SymplecticBase:
    """Symplectic base of a nondegenerate armature.

    Prime exponent p goes through symplectic_extend on F_p-coordinates.
    Otherwise each p-primary part is split greedily and the k-th pairs of
    the different primes are added together (orders coprime, so the sum
    pair has the product order and cross pairings stay trivial).
    """
    grp = arm.group
    if arm.order == 1:
        return SymplecticBase([], [], [], [])
    if len(arm.radical()) != 1:
        raise DegenerateRadical("armature pairing has a nontrivial radical")
    E = arm.exponent
    primes = sorted(factorint(E))
    if len(primes) == 1 and E == primes[0]:
        p = E
        r = grp.rank
        G = [[arm.pairing_log(tuple(int(i == a) for i in range(r)), tuple(int(i == b) for i in range(r)))
              for b in range(r)] for a in range(r)]
        raw = symplectic_extend(p, G, [])
        pairs = [(grp.norm(e), grp.norm(f)) for e, f in raw]
        orders = [p] * len(pairs)
    else:
        per_prime = []
        for p in primes:
            pp = _primary_pairs(arm, p)
            pp.sort(key=lambda t: -t[2])
            per_prime.append(pp)
        width = max(len(pp) for pp in per_prime)
        pairs, orders = [], []
        for k in range(width):
            g, h, o = grp.zero(), grp.zero(), 1
            for pp in per_prime:
                if k < len(pp):
                    a, b, oa = pp[k]
                    g, h, o = grp.add(g, a), grp.add(h, b), o * oa
            pairs.append((g, h))
            orders.append(o)
    logs = [arm.pairing_log(g, h) for g, h in pairs]
    values = [arm.root(k) for k in logs]
    return SymplecticBase(pairs, orders, logs, values)


def check_symplectic(arm: Armature, base: SymplecticBase) -> bool:
    grp = arm.group
    E = arm.exponent
    flat = [v for pr in base.pairs for v in pr]
    for (g, h), o, lg in zip(base.pairs, base.orders, base.logs):
        if grp.element_order(g) != o or grp.element_order(h) != o or E // gcd(lg, E) != o:
            return False
    for a in range(len(flat)):
        for b in range(len(flat)):
            if a // 2 != b // 2 and arm.pairing_log(flat[a], flat[b]):
                return False
    prod_orders = 1
    for o in base.orders:
        prod_orders *= o * o
    return prod_orders == arm.order


# ---------------------------------------------------------------------------
# decomposition

@dataclass
class Decomposition:
    factors: list
    tensor: Algebra
    base: SymplecticBase
    report: IsomorphismReport
    images: list = field(repr=False, default=None)
    generator_images: list = field(repr=False, default=None)


def decompose_by_armature(A: Algebra, arm: Armature, base: SymplecticBase = None) -> Decomposition:
    """Symbol factors F[(g_k) x (h_k)] of a symplectic base, with an isomorphism witness."""
    from .symbols import symbol_algebra

    T = A.T
    if base is None:
        base = symplectic_base(arm)
    factors, gimgs = [], []
    for (g, h), n, val in zip(base.pairs, base.orders, base.values):
        xg, xh = arm.rep(g), arm.rep(h)
        a = (xg ** n).scalar_value()
        b = (xh ** n).scalar_value()
        factors.append(symbol_algebra(T, a, b, n, zeta=val))
        gimgs.append((xg, xh))
    if not factors:
        tensor = A
        images = [A.one()]
        report = IsomorphismReport(A.dim == 1, "" if A.dim == 1 else "empty base", None, 1)
        return Decomposition([], A, base, report, images, [])
    tensor = factors[0] if len(factors) == 1 else TensorAlgebra(factors, name="⊗".join(f.name for f in factors))
    powers = []
    for (xg, xh), n in zip(gimgs, base.orders):
        pg = [A.one()]
        ph = [A.one()]
        for _ in range(1, n):
            pg.append(pg[-1] * xg)
            ph.append(ph[-1] * xh)
        powers.append([pg[al] * ph[be] for al in range(n) for be in range(n)])

    def img(idx):
        parts = tensor.split(idx) if len(factors) > 1 else (idx,)
        acc = powers[0][parts[0]]
        for k in range(1, len(parts)):
            acc = acc * powers[k][parts[k]]
        return acc

    images = [img(i) for i in range(tensor.dim)]
    report = verify_isomorphism(tensor, A, images)
    return Decomposition(factors, tensor, base, report, images, gimgs)
