import pytest
from hypothesis import given
from hypothesis import strategies as st

from csa.algebra import reduced_trace, verify_isomorphism
from csa.errors import MissingRootOfUnity, NotAField, NotCyclic, ZeroInput
from csa.fields import FieldTower
from csa.symbols import (
    cyclic_algebra,
    cyclic_relation_holds,
    embed_kummer,
    kum_group,
    kummer_extension,
    kummer_pairing,
    quaternion_division_status,
    separability_idempotent,
    standard_armature,
    symbol_algebra,
    symbol_generators,
)
from csa.algebra import tensor

Q = FieldTower(0, 1, ())
Qz3 = FieldTower(0, 3, ())
Qt = FieldTower(0, 1, ("t",))
F5t = FieldTower(5, 1, ("t",))


# -- symbol algebras ---------------------------------------------------------------

@pytest.mark.parametrize("T,a,b,n", [(Q, -1, 3, 2), (Qz3, 2, 5, 3), (Qt, -1, "t", 2), (F5t, 2, "t", 4)])
def test_defining_relations(T, a, b, n):
    A = symbol_algebra(T, T.parse(str(a)) if isinstance(a, str) else a,
                       T.parse(b) if isinstance(b, str) else b, n)
    i, j = symbol_generators(A)
    s = A.meta["symbol"]
    assert i ** n == A.scalar(s["a"])
    assert j ** n == A.scalar(s["b"])
    assert i * j == (j * i) * s["zeta"]
    assert A.dim == n * n and A.associativity_failure() is None


def test_zero_parameter_rejected():
    with pytest.raises(ZeroInput):
        symbol_algebra(Q, 0, 3)


def test_missing_root_of_unity():
    with pytest.raises(MissingRootOfUnity):
        symbol_algebra(Q, 2, 3, 3)


def test_non_primitive_zeta_rejected():
    with pytest.raises(MissingRootOfUnity):
        symbol_algebra(Q, 2, 3, 2, zeta=1)


def test_basis_trace_is_degree_at_one_only():
    A = symbol_algebra(Qz3, 2, 5, 3)
    assert [reduced_trace(x) for x in A.basis_elements()] == [3] + [0] * 8


def test_symbol_symmetry():
    # (a,b)_zeta is isomorphic to (b,a)_{zeta^-1} via i -> j', j -> i'
    z = Qz3.zeta(3)
    A = symbol_algebra(Qz3, 2, 5, 3, zeta=z)
    B = symbol_algebra(Qz3, 5, 2, 3, zeta=z * z)
    i2, j2 = symbol_generators(B)

    def img(idx):
        al, be = divmod(idx, 3)
        return (j2 ** al) * (i2 ** be)

    assert verify_isomorphism(A, B, img).passed


@pytest.mark.parametrize("a,b,status", [(-1, -1, "division"), (-1, 3, "unknown"), (2, 7, "split"),
                                        (1, 5, "split"), (-1, -7, "division")])
def test_quaternion_status_over_q(a, b, status):
    A = symbol_algebra(Q, a, b)
    got, ev = quaternion_division_status(A)
    assert got == status
    if got == "split":
        # the evidence is an honest zero divisor
        assert ev["zero_divisor"] and ev["partner"]
        assert not (ev["zero_divisor"] * ev["partner"])


def test_quaternion_status_over_laurent_field():
    A = symbol_algebra(F5t, 2, F5t.var("t"))
    assert quaternion_division_status(A)[0] == "division"


# -- Kummer fields ------------------------------------------------------------------

def test_kummer_field_degree_and_relations():
    M = kummer_extension(Q, [2, 3], [2, 2])
    assert M.algebra.dim == 4
    assert M.gen(0) ** 2 == M.algebra.scalar(2)
    assert M.gen(0) * M.gen(1) == M.gen(1) * M.gen(0)


@pytest.mark.parametrize("radicands", [[2, 8], [4], [2, 3, 6]])
def test_kummer_not_a_field(radicands):
    with pytest.raises(NotAField):
        kummer_extension(Q, radicands, [2] * len(radicands))


def test_kummer_needs_roots_of_unity():
    with pytest.raises(MissingRootOfUnity):
        kummer_extension(Q, [2], [3])


def test_kummer_zero_radicand():
    with pytest.raises(ZeroInput):
        kummer_extension(Q, [0], [2])


def test_sigma_is_field_automorphism():
    M = kummer_extension(Qz3, [2, 5], [3, 3])
    els = M.algebra.basis_elements()
    for m in M.group_elements():
        for x in els:
            for y in els:
                assert M.apply_sigma(m, x * y) == M.apply_sigma(m, x) * M.apply_sigma(m, y)


@given(st.tuples(st.integers(0, 2), st.integers(0, 2)), st.tuples(st.integers(0, 2), st.integers(0, 2)),
       st.tuples(st.integers(0, 2), st.integers(0, 2)))
def test_kummer_pairing_bimultiplicative(m1, m2, e):
    M = kummer_extension(Qz3, [2, 5], [3, 3])
    m12 = tuple((a + b) % 3 for a, b in zip(m1, m2))
    assert kummer_pairing(M, m12, e) == kummer_pairing(M, m1, e) * kummer_pairing(M, m2, e)
    e2 = tuple((2 * x) % 3 for x in e)
    assert kummer_pairing(M, m1, e2) == kummer_pairing(M, m1, e) ** 2


def test_kummer_pairing_perfect():
    M = kummer_extension(Qz3, [2, 5], [3, 3])
    for m in M.group_elements():
        if any(m):
            assert any(kummer_pairing(M, m, e) != 1 for e in M.group_elements())


def test_embed_kummer_searches_images():
    A = tensor(symbol_algebra(Q, 2, -1), symbol_algebra(Q, -1, -1))
    M = kummer_extension(Q, [-1, 2], [2, 2])
    phi = embed_kummer(A, M)
    _check_hom(M, phi)


def test_embed_kummer_explicit_images():
    A = tensor(symbol_algebra(Q, -1, -1), symbol_algebra(Q, 2, -1))
    M = kummer_extension(Q, [-1, 2], [2, 2])
    i1, i2 = symbol_generators(A.factors[0])[0], symbol_generators(A.factors[1])[0]
    phi = embed_kummer(A, M, [A.embed(0, i1), A.embed(1, i2)])
    _check_hom(M, phi)


def _check_hom(M, phi):
    for x in M.algebra.basis_elements():
        for y in M.algebra.basis_elements():
            assert phi(x * y) == phi(x) * phi(y)


def test_embed_kummer_rejects_bad_images():
    A = symbol_algebra(Q, -1, 3)
    M = kummer_extension(Q, [3], [2])
    i, _ = symbol_generators(A)
    with pytest.raises(ValueError):
        embed_kummer(A, M, [i])


def test_kum_group_is_armature_of_m():
    M = kummer_extension(Q, [2, 3], [2, 2])
    K = kum_group(M)
    assert K.order == 4


# -- cyclic algebras ------------------------------------------------------------------

@pytest.mark.parametrize("T,b,a,n", [(Q, 3, -1, 2), (Qz3, 2, 7, 3)])
def test_cyclic_algebra_matches_symbol(T, b, a, n):
    k = kummer_extension(T, [b], [n])
    C, rep = cyclic_algebra(k, a)
    assert rep.passed and C.dim == n * n
    assert cyclic_relation_holds(C, k)


def test_cyclic_needs_single_step():
    with pytest.raises(NotCyclic):
        cyclic_algebra(kummer_extension(Q, [2, 3], [2, 2]), -1)


# -- separability idempotents ------------------------------------------------------------

@pytest.mark.parametrize("T,rad,deg", [(Q, [2], [2]), (Q, [2, 3], [2, 2]), (Qz3, [2], [3])])
def test_separability_idempotent(T, rad, deg):
    data = separability_idempotent(kummer_extension(T, rad, deg))
    assert all(data.checks.values()), data.checks
    assert len(data.family) == data.MM.dim // kummer_extension(T, rad, deg).algebra.dim


# -- standard armature -------------------------------------------------------------------

def test_standard_armature_of_biquaternion():
    A = tensor(symbol_algebra(Q, -1, -1), symbol_algebra(Q, 2, 5))
    arm = standard_armature(A)
    assert arm.order == 16 and arm.is_nondegenerate()
    assert arm.recorded_symplectic == [(0, 1), (2, 3)]


def test_unit_parameter_gives_zero_divisor():
    A = symbol_algebra(Q, 1, 7)
    i, _ = symbol_generators(A)
    assert not ((i - A.one()) * (i + A.one()))
    status, ev = quaternion_division_status(A)
    assert status == "split" and not (ev["zero_divisor"] * ev["partner"])


def test_generator_pairing_is_zeta():
    from csa.armature import commutator_scalar

    A = symbol_algebra(Qz3, 2, 5, 3)
    i, j = symbol_generators(A)
    assert commutator_scalar(i, j) == Qz3.zeta(3)
