"""Symbol and cyclic algebras, Kummer extensions, Kum groups and separability idempotents."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import lcm
from typing import Optional

from . import linalg
from .abelian import AbelianGroup
from .algebra import (
    Algebra,
    AlgebraElement,
    IsomorphismReport,
    TensorAlgebra,
    inverse,
    is_invertible,
    verify_isomorphism,
)
from .errors import MissingRootOfUnity, NotAField, NotCyclic, ZeroInput
from .fields import FieldTower, RatFunc, monomial_valuation


def _power_label(name, e):
    if e == 0:
        return ""
    return name if e == 1 else f"{name}^{e}"


def _mono_label(parts):
    s = "*".join(p for p in parts if p)
    return s or "1"


# ---------------------------------------------------------------------------
# symbol algebras

def symbol_algebra(T: FieldTower, a, b, n: int = 2, zeta=None, names=("i", "j"), name=None) -> Algebra:
    """(a, b)_zeta: i^n = a, j^n = b, ij = zeta ji, on the basis i^al j^be (index al*n + be)."""
    a, b = T(a), T(b)
    if not a or not b:
        raise ZeroInput("symbol parameters must be nonzero")
    if zeta is None:
        zeta = T.zeta(n)
    zeta = T(zeta)
    if n > 1 and not _is_primitive(zeta, n):
        raise MissingRootOfUnity(f"{T.format(zeta)} is not a primitive {n}-th root of unity")
    zp = [T.one]
    for _ in range(1, n):
        zp.append(zp[-1] * zeta)
    table = {}
    for al, be, ga, de in product(range(n), repeat=4):
        c = zp[(-be * ga) % n]
        s, t = al + ga, be + de
        if s >= n:
            s -= n
            c = c * a
        if t >= n:
            t -= n
            c = c * b
        table[(al * n + be, ga * n + de)] = [(s * n + t, c)]
    labels = [_mono_label([_power_label(names[0], al), _power_label(names[1], be)])
              for al in range(n) for be in range(n)]
    trd = [n if k == 0 else 0 for k in range(n * n)]
    A = Algebra(T, labels, table, one={0: 1}, degree=n, basis_trd=trd,
                name=name or f"({T.format(a)},{T.format(b)})_{n}", check=False)
    A.meta["symbol"] = {"a": a, "b": b, "n": n, "zeta": zeta}
    A.meta["generators"] = [A.basis(n), A.basis(1)]
    return A


def _is_primitive(z, n) -> bool:
    acc = z
    for k in range(1, n):
        if acc == 1:
            return False
        acc = acc * z
    return acc == 1


def symbol_generators(A: Algebra):
    """(i, j) of a symbol algebra built by symbol_algebra."""
    n = A.meta["symbol"]["n"]
    return A.basis(n), A.basis(1)


def symbol_factors(A: Algebra):
    """Flatten a (nested) tensor product of symbol algebras into (factor, embed) pairs."""
    if "symbol" in A.meta:
        return [(A, lambda x: x)]
    if A.factors:
        out = []
        for k, f in enumerate(A.factors):
            for g, emb in symbol_factors(f):
                out.append((g, (lambda e, k=k: (lambda x: A.embed(k, e(x))))(emb)))
        return out
    raise ValueError(f"{A.name} is not given in factored symbol form")


def quaternion_division_status(A: Algebra, box: int = 6):
    """'division', 'split' or 'unknown' for a quaternion symbol algebra, with evidence.

    Over Q: both parameters negative means the norm form is definite, so
    division; otherwise a zero of x^2 - a y^2 - b z^2 is searched in a box.
    Over F_p(t): (c, b) with c a constant nonsquare and v_t(b) odd is
    division (the t-adic residue of the symbol is nontrivial).  Finite
    fields always split.  A found zero gives an explicit zero divisor.
    """
    sym = A.meta.get("symbol")
    if not sym or sym["n"] != 2:
        raise ValueError("quaternion symbol algebra expected")
    T = A.T
    a, b = sym["a"], sym["b"]
    i, j = symbol_generators(A)
    if T.nth_root(a, 2) is not None:
        r = T.nth_root(a, 2)
        return "split", {"zero_divisor": (i - r), "partner": (i + r)}
    if T.nth_root(b, 2) is not None:
        r = T.nth_root(b, 2)
        return "split", {"zero_divisor": (j - r), "partner": (j + r)}
    if T.p == 0 and not T.nvars and T.K.degree == 1:
        if a < 0 and b < 0:
            return "division", {"reason": "norm form is negative definite"}
        for x, y, z in product(range(-box, box + 1), repeat=3):
            if (x, y, z) != (0, 0, 0) and x * x - a * y * y - b * z * z == 0:
                # reduced norm of q = x + y i + z j vanishes, so q * conj(q) = 0
                q = A.scalar(x) + i * y + j * z
                return "split", {"zero_divisor": q, "partner": A.scalar(x) - i * y - j * z}
        return "unknown", {"reason": f"no isotropic vector in box {box}"}
    if T.p and T.nvars == 1:
        for c, d in ((a, b), (b, a)):
            cv = T.constant_value(c)
            if cv is not None and T.K.degree == 1 and T.K.nth_root(cv, 2) is None:
                v = monomial_valuation(T, d)
                if v.num[0] % 2:
                    return "division", {"reason": "constant nonsquare against odd t-adic valuation"}
    if T.p and not T.nvars:
        return "split", {"reason": "quaternion algebras over finite fields split"}
    return "unknown", {"reason": "no decision procedure applies"}


# ---------------------------------------------------------------------------
# Kummer fields

@dataclass
class KummerField:
    """M = F[x_1..x_r]/(x_i^{n_i} - b_i) with sigma_i : x_i -> zeta_{n_i} x_i."""

    T: FieldTower
    radicands: list
    degrees: list
    algebra: Algebra
    names: list
    zetas: list = field(default_factory=list)

    @property
    def r(self) -> int:
        return len(self.degrees)

    @property
    def group(self) -> AbelianGroup:
        return AbelianGroup(self.degrees)

    @property
    def exponent(self) -> int:
        return lcm(*self.degrees) if self.degrees else 1

    def gen(self, i: int) -> AlgebraElement:
        return self.algebra.basis(self.index([1 if k == i else 0 for k in range(self.r)]))

    def index(self, exps) -> int:
        k = 0
        for d, e in zip(self.degrees, exps):
            k = k * d + (e % d)
        return k

    def exps(self, k: int):
        out = []
        for d in reversed(self.degrees):
            k, e = divmod(k, d)
            out.append(e)
        return tuple(reversed(out))

    def monomial(self, exps) -> AlgebraElement:
        """x^e with exponents reduced mod n_i (the radicand carries are applied)."""
        coeff = self.T.one
        red = []
        for e, n, b in zip(exps, self.degrees, self.radicands):
            q, rr = divmod(e, n)
            coeff = coeff * (b ** q)
            red.append(rr)
        return self.algebra.basis(self.index(red)) * coeff

    def sigma_scalar(self, m, exps):
        """sigma_m(x^e) / x^e."""
        c = self.T.one
        for mi, ei, z, n in zip(m, exps, self.zetas, self.degrees):
            k = (mi * ei) % n
            if k:
                c = c * z ** k
        return c

    def apply_sigma(self, m, x: AlgebraElement) -> AlgebraElement:
        out = {}
        for k, c in x.c.items():
            out[k] = c * self.sigma_scalar(m, self.exps(k))
        return AlgebraElement(self.algebra, out)

    def group_elements(self):
        return list(product(*[range(n) for n in self.degrees]))


def kummer_extension(T: FieldTower, radicands, degrees, names=None) -> KummerField:
    """Kummer field with a verified field property.

    M has degree prod n_i iff e -> prod b_i^{e_i l/n_i} is injective from
    prod Z/n_i into F^x / F^{x l} (Kummer theory, l = lcm n_i); every
    nonzero e is checked exactly with the tower's root extraction.
    """
    radicands = [T(b) for b in radicands]
    degrees = [int(n) for n in degrees]
    if len(radicands) != len(degrees):
        raise ValueError("one degree per radicand")
    if any(not b for b in radicands):
        raise ZeroInput("radicands must be nonzero")
    ell = lcm(*degrees) if degrees else 1
    T.zeta(ell)  # raises MissingRootOfUnity
    for e in product(*[range(n) for n in degrees]):
        if not any(e):
            continue
        x = T.one
        for b, n, ei in zip(radicands, degrees, e):
            x = x * b ** (ei * (ell // n))
        if T.nth_root(x, ell) is not None:
            raise NotAField(f"exponent vector {e} gives an {ell}-th power; the tensor product of the k_i is not a field")
    names = list(names) if names else [f"x{k + 1}" for k in range(len(degrees))]
    r = len(degrees)
    elems = list(product(*[range(n) for n in degrees]))

    def idx(exps):
        k = 0
        for d, e in zip(degrees, exps):
            k = k * d + e
        return k

    table = {}
    for e in elems:
        for f in elems:
            c = T.one
            g = []
            for ei, fi, n, b in zip(e, f, degrees, radicands):
                s = ei + fi
                if s >= n:
                    s -= n
                    c = c * b
                g.append(s)
            table[(idx(e), idx(f))] = [(idx(g), c)]
    labels = [_mono_label([_power_label(nm, ei) for nm, ei in zip(names, e)]) for e in elems]
    A = Algebra(T, labels, table, one={0: 1}, name="M", check=False)
    A.meta["generators"] = [A.basis(idx([1 if k == i else 0 for k in range(r)])) for i in range(r)]
    zetas = [T.zeta(n) for n in degrees]
    return KummerField(T, radicands, degrees, A, names, zetas)


def embed_kummer(A: Algebra, M: KummerField, images=None):
    """Homomorphism M -> A from images of x_i (searched among basis elements if absent)."""
    T = A.T
    if images is None:
        images = []
        for b, n in zip(M.radicands, M.degrees):
            found = None
            for k in range(A.dim):
                u = A.basis(k)
                if (u ** n).scalar_value() == b and all(u.commutes_with(v) for v in images):
                    found = u
                    break
            if found is None:
                raise ValueError("no basis element realizes the radicand")
            images.append(found)
    images = list(images)
    for u, b, n in zip(images, M.radicands, M.degrees):
        if (u ** n) != A.scalar(b):
            raise ValueError("image does not satisfy x^n = b")
    for u in images:
        for v in images:
            if not u.commutes_with(v):
                raise ValueError("images of the x_i do not commute")
    basis_images = []
    for k in range(M.algebra.dim):
        e = M.exps(k)
        acc = A.one()
        for u, ei in zip(images, e):
            if ei:
                acc = acc * u ** ei
        basis_images.append(acc)

    def phi(x: AlgebraElement) -> AlgebraElement:
        acc = A.zero()
        for k, c in x.c.items():
            acc = acc + basis_images[k] * c
        return acc

    phi.images = images
    phi.basis_images = basis_images
    return phi


def kummer_pairing(M: KummerField, m, e):
    """(sigma_m, x^e F^x) = sigma_m(x^e) / x^e."""
    return M.sigma_scalar(m, e)


def kum_group(M: KummerField):
    """Kum(M/F) as an armature of M with monomial representatives."""
    from .armature import Armature

    return Armature(M.algebra, [M.gen(i) for i in range(M.r)], M.degrees, name="Kum(M/F)")


# ---------------------------------------------------------------------------
# cyclic algebras

def cyclic_algebra(k: KummerField, a, name=None, names=("x", "y")):
    """(k, sigma, a) for k = F(b^{1/n}): basis x^m y^l, y c y^-1 = sigma(c), y^n = a.

    Returns (algebra, report) where the report witnesses the isomorphism
    with the symbol algebra (a, b)_zeta via i -> y, j -> x.
    """
    if k.r != 1:
        raise NotCyclic("cyclic algebras need a single Kummer step")
    T = k.T
    n = k.degrees[0]
    b = k.radicands[0]
    zeta = k.zetas[0]
    a = T(a)
    if not a:
        raise ZeroInput("a must be nonzero")
    zp = [T.one]
    for _ in range(1, n):
        zp.append(zp[-1] * zeta)
    table = {}
    # index m*n + l for x^m y^l; (x^m y^l)(x^p y^q) = zeta^{lp} x^{m+p} y^{l+q}
    for m_, l_, p_, q_ in product(range(n), repeat=4):
        c = zp[(l_ * p_) % n]
        s, t = m_ + p_, l_ + q_
        if s >= n:
            s -= n
            c = c * b
        if t >= n:
            t -= n
            c = c * a
        table[(m_ * n + l_, p_ * n + q_)] = [(s * n + t, c)]
    labels = [_mono_label([_power_label(names[0], m_), _power_label(names[1], l_)])
              for m_ in range(n) for l_ in range(n)]
    trd = [n if idx == 0 else 0 for idx in range(n * n)]
    C = Algebra(T, labels, table, one={0: 1}, degree=n, basis_trd=trd,
                name=name or f"({k.names[0]}:{T.format(b)},sigma,{T.format(a)})", check=False)
    C.meta["cyclic"] = {"a": a, "b": b, "n": n}
    C.meta["generators"] = [C.basis(n), C.basis(1)]
    S = symbol_algebra(T, a, b, n, zeta)
    x, y = C.basis(n), C.basis(1)

    def img(idx):
        al, be = divmod(idx, n)
        return (y ** al) * (x ** be)

    report = verify_isomorphism(S, C, img)
    return C, report


def cyclic_relation_holds(C: Algebra, k: KummerField) -> bool:
    """y c = sigma(c) y for c in the basis of k."""
    n = k.degrees[0]
    y = C.basis(1)
    x = C.basis(n)
    for m_ in range(n):
        c = x ** m_
        sc = c * (k.zetas[0] ** m_)
        if y * c != sc * y:
            return False
    return True


# ---------------------------------------------------------------------------
# separability idempotents

@dataclass
class SeparabilityData:
    MM: TensorAlgebra
    e: AlgebraElement
    family: dict
    checks: dict


def multiplication_map(M: KummerField, MM: TensorAlgebra, z: AlgebraElement) -> AlgebraElement:
    out = M.algebra.zero()
    for idx, c in z.c.items():
        p, q = MM.split(idx)
        out = out + (M.algebra.basis(p) * M.algebra.basis(q)) * c
    return out


def id_tensor_sigma(M: KummerField, MM: TensorAlgebra, m, z: AlgebraElement) -> AlgebraElement:
    out = {}
    for idx, c in z.c.items():
        _, q = MM.split(idx)
        out[idx] = c * M.sigma_scalar(m, M.exps(q))
    return AlgebraElement(MM, out)


def separability_idempotent(M: KummerField) -> SeparabilityData:
    """e = prod_i (1/n_i) sum_k x_i^k (x) x_i^{-k} and e_sigma = (id (x) sigma)(e), verified."""
    T = M.T
    Ma = M.algebra
    MM = TensorAlgebra([Ma, Ma], name="M⊗M")
    e = MM.one()
    for i, (n, b) in enumerate(zip(M.degrees, M.radicands)):
        part = MM.zero()
        for k in range(n):
            ek = [0] * M.r
            ek[i] = k
            inv = [0] * M.r
            inv[i] = (n - k) % n
            coeff = T.one / (b if k else T.one)
            part = part + MM.pure([Ma.basis(M.index(ek)), Ma.basis(M.index(inv))]) * coeff
        e = e * (part * (T.one / T(n)))
    family = {m: id_tensor_sigma(M, MM, m, e) for m in M.group_elements()}
    one_ = Ma.one()
    checks = {}
    checks["idempotent"] = e * e == e
    checks["multiplication_is_one"] = multiplication_map(M, MM, e) == one_
    ok33 = True
    ok34 = True
    for i in range(Ma.dim):
        x = Ma.basis(i)
        if e * MM.pure([x, one_]) != e * MM.pure([one_, x]):
            ok33 = False
        for m, es in family.items():
            if es * MM.pure([x, one_]) != es * MM.pure([one_, M.apply_sigma(m, x)]):
                ok34 = False
    checks["e(x⊗1)=e(1⊗x)"] = ok33
    checks["e_σ(x⊗1)=e_σ(1⊗σx)"] = ok34
    total = MM.zero()
    orth = True
    keys = list(family)
    for s in keys:
        total = total + family[s]
        for t in keys:
            if s != t and family[s] * family[t]:
                orth = False
    checks["orthogonal"] = orth
    checks["sum_is_one"] = total == MM.one()
    checks["e_id=e"] = family[tuple([0] * M.r)] == e
    return SeparabilityData(MM, e, family, checks)


# ---------------------------------------------------------------------------
# standard armature

def standard_armature(A: Algebra):
    """Armature generated by the symbol generators i_k, j_k of every factor."""
    from .armature import Armature

    gens, orders, pairs = [], [], []
    for f, emb in symbol_factors(A):
        n = f.meta["symbol"]["n"]
        i, j = symbol_generators(f)
        pairs.append((len(gens), len(gens) + 1))
        gens += [emb(i), emb(j)]
        orders += [n, n]
    arm = Armature(A, gens, orders, name="standard")
    arm.recorded_symplectic = pairs
    return arm
