import random
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from csa import armature as armod
from csa.algebra import tensor
from csa.armature import (
    Armature,
    check_symplectic,
    commutator_scalar,
    decompose_by_armature,
    is_standard_symplectic,
    symplectic_base,
    symplectic_extend,
    verify_armature,
)
from csa.errors import DegenerateForm, DegenerateRadical, NotIndependent, NotIsotropic, NotScalar
from csa.fields import FieldTower
from csa.symbols import standard_armature, symbol_algebra, symbol_generators

Q = FieldTower(0, 1, ())
Qz3 = FieldTower(0, 3, ())
Qt = FieldTower(0, 1, ("t",))

BIQ = tensor(symbol_algebra(Q, -1, -1), symbol_algebra(Q, 2, 5))
DEG3 = symbol_algebra(Qz3, 2, 5, 3)


def standard_form(p, m):
    """Gram matrix of sum x_{2k} y_{2k+1} - x_{2k+1} y_{2k}."""
    G = [[0] * (2 * m) for _ in range(2 * m)]
    for k in range(m):
        G[2 * k][2 * k + 1] = 1
        G[2 * k + 1][2 * k] = p - 1
    return G


def bil(G, u, v, p):
    return sum(u[a] * G[a][b] * v[b] for a in range(len(u)) for b in range(len(v))) % p


def rank_mod(rows, p):
    rows = [list(r) for r in rows]
    r = 0
    for c in range(len(rows[0]) if rows else 0):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] % p), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        for i in range(len(rows)):
            if i != r and rows[i][c] % p:
                f = rows[i][c] * inv
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        r += 1
    return r


# -- armature axioms -------------------------------------------------------------------

def test_standard_armature_verifies():
    for A in (BIQ, DEG3, symbol_algebra(Qt, -1, Qt.var("t"))):
        rep = verify_armature(A, standard_armature(A))
        assert rep.passed, rep
        assert rep.checks["pairing_consistent"]


def test_pairing_table_matches_commutators():
    arm = standard_armature(BIQ)
    for a in arm.elements():
        for b in arm.elements():
            assert arm.pairing(a, b) == arm.pairing_direct(a, b)


@given(st.lists(st.integers(0, 2), min_size=2, max_size=2),
       st.lists(st.integers(0, 2), min_size=2, max_size=2),
       st.lists(st.integers(0, 2), min_size=2, max_size=2))
def test_pairing_laws_degree3(a, b, c):
    arm = standard_armature(DEG3)
    a, b, c = tuple(a), tuple(b), tuple(c)
    ab = arm.group.add(a, b)
    assert arm.pairing(a, a) == 1
    assert arm.pairing(a, b) * arm.pairing(b, a) == 1
    assert arm.pairing(ab, c) == arm.pairing(a, c) * arm.pairing(b, c)


def test_representatives_rescaled_keep_pairing():
    A = symbol_algebra(Q, -1, 3)
    i, j = symbol_generators(A)
    arm = Armature(A, [i * Q(5), j * Q(-2)], [2, 2])
    assert commutator_scalar(i * Q(5), j * Q(-2)) == commutator_scalar(i, j) == -1
    assert verify_armature(A, arm).passed


def test_non_scalar_power_rejected():
    A = symbol_algebra(Q, -1, 3)
    i, j = symbol_generators(A)
    rep = verify_armature(A, Armature(A, [i + j, j], [2, 2]))
    # (i + j)^2 = -1 + 3 is a scalar, but i + j and j do not commute up to scalars
    assert not rep.passed and rep.failed_axiom == "abelian"
    rep = verify_armature(A, Armature(A, [A.one() + i, j], [2, 2]))
    assert rep.failed_axiom == "generator_order"


def test_wrong_order_rejected():
    A = symbol_algebra(Q, -1, 3)
    i, _ = symbol_generators(A)
    assert verify_armature(A, Armature(A, [i], [2])).failed_axiom == "order"


def test_dependent_representatives_rejected():
    f0 = BIQ.factors[0]
    i1, j1 = symbol_generators(f0)
    x = BIQ.embed(0, i1)
    y = BIQ.embed(0, j1)
    # i1 twice: order 16 but only 8 distinct classes
    arm = Armature(BIQ, [x, x, y, y * x], [2, 2, 2, 2])
    assert verify_armature(BIQ, arm).failed_axiom == "spanning"


def test_non_root_of_unity_commutator():
    A = symbol_algebra(Q, -1, 3)
    i, j = symbol_generators(A)
    with pytest.raises(NotScalar):
        commutator_scalar(i, A.one() + j)


# -- symplectic_extend ----------------------------------------------------------------

def test_extend_standard_form_from_empty():
    pairs = symplectic_extend(3, standard_form(3, 2))
    assert is_standard_symplectic(3, pairs, standard_form(3, 2))


def test_extend_respects_prefix():
    G = standard_form(5, 2)
    E = [(1, 0, 0, 0), (0, 0, 1, 0)]
    pairs = symplectic_extend(5, G, E)
    assert [e for e, _ in pairs] == E
    assert is_standard_symplectic(5, pairs, G)


def test_extend_errors():
    G = standard_form(3, 2)
    with pytest.raises(NotIndependent):
        symplectic_extend(3, G, [(1, 0, 0, 0), (2, 0, 0, 0)])
    with pytest.raises(NotIsotropic):
        symplectic_extend(3, G, [(1, 0, 0, 0), (0, 1, 0, 0)])
    with pytest.raises(DegenerateForm):
        symplectic_extend(3, [[0, 1, 0], [2, 0, 0], [0, 0, 0]])
    with pytest.raises(DegenerateForm):
        symplectic_extend(3, [[1, 0], [0, 1]])


def _all_isotropic_lists(p, n, G):
    vecs = [v for v in product(range(p), repeat=n) if any(v)]
    out = [()]
    frontier = [()]
    while frontier:
        nxt = []
        for E in frontier:
            for v in vecs:
                F = E + (v,)
                if len(F) <= n // 2 and rank_mod(F, p) == len(F) and all(bil(G, u, v, p) == 0 for u in E):
                    nxt.append(F)
        out += nxt
        frontier = nxt
    return out


@pytest.mark.parametrize("p,m", [(2, 2), (3, 2), (5, 1)])
def test_extend_every_isotropic_list(p, m):
    # any linearly independent isotropic list lies in a Lagrangian, so it is always completable
    G = standard_form(p, m)
    for E in _all_isotropic_lists(p, 2 * m, G):
        pairs = symplectic_extend(p, G, list(E))
        assert [e for e, _ in pairs[: len(E)]] == list(E)
        assert is_standard_symplectic(p, pairs, G)


@pytest.mark.parametrize("seed", range(5))
def test_extend_random_forms(seed):
    rng = random.Random(seed)
    p, n = rng.choice([(2, 4), (3, 4), (2, 6), (7, 2)])
    while True:
        G = [[0] * n for _ in range(n)]
        for a in range(n):
            for b in range(a + 1, n):
                G[a][b] = rng.randrange(p)
                G[b][a] = (-G[a][b]) % p
        if rank_mod(G, p) == n:
            break
    assert is_standard_symplectic(p, symplectic_extend(p, G), G)


def test_tabulated_and_general_paths_agree(monkeypatch):
    rng = random.Random(7)
    G = standard_form(3, 2)
    lists = _all_isotropic_lists(3, 4, G)
    sample = rng.sample(lists, 40)
    fast = [symplectic_extend(3, G, list(E)) for E in sample]
    armod._checked_form.cache_clear()
    monkeypatch.setattr(armod, "TABLE_SPACE_LIMIT", 0)
    try:
        slow = [symplectic_extend(3, G, list(E)) for E in sample]
    finally:
        armod._checked_form.cache_clear()
    assert fast == slow


def test_large_space_uses_general_path():
    G = standard_form(2, 5)   # 1024 vectors, above the table limit
    pairs = symplectic_extend(2, G, [(1, 0, 0, 0, 0, 0, 0, 0, 0, 0)])
    assert is_standard_symplectic(2, pairs, G)


# -- symplectic bases and decompositions ---------------------------------------------------

@pytest.mark.parametrize("A", [BIQ, DEG3, symbol_algebra(Qz3, 2, 5, 6)], ids=["biq", "deg3", "deg6"])
def test_symplectic_base_and_decomposition(A):
    arm = standard_armature(A)
    base = symplectic_base(arm)
    assert check_symplectic(arm, base)
    dec = decompose_by_armature(A, arm, base)
    assert dec.report.passed
    assert dec.tensor.dim == A.dim


def test_mixed_exponent_base_combines_primes():
    A = symbol_algebra(Qz3, 2, 5, 6)
    base = symplectic_base(standard_armature(A))
    assert base.orders == [6]


def test_degenerate_armature_has_no_base():
    A = symbol_algebra(Q, -1, 3)
    i, _ = symbol_generators(A)
    arm = Armature(A, [i], [2])
    with pytest.raises(DegenerateRadical):
        symplectic_base(arm)


def test_decomposition_of_rearranged_armature():
    # generators i1 j2, j1, i2 j1 ... still give a symplectic base and an isomorphism
    f0, f1 = BIQ.factors
    i1, j1 = symbol_generators(f0)
    i2, j2 = symbol_generators(f1)
    x = [BIQ.embed(0, i1) * BIQ.embed(1, j2), BIQ.embed(0, j1), BIQ.embed(1, i2), BIQ.embed(1, j2)]
    arm = Armature(BIQ, x, [2, 2, 2, 2])
    assert verify_armature(BIQ, arm).passed
    dec = decompose_by_armature(BIQ, arm)
    assert check_symplectic(arm, dec.base) and dec.report.passed


# -- worked examples ------------------------------------------------------------------------

def test_orthogonal_and_radical():
    A = symbol_algebra(Q, -1, 3)
    arm = standard_armature(A)
    # generators are (i, j); i is the exponent tuple (1, 0)
    assert sorted(arm.orthogonal([(1, 0)])) == [(0, 0), (1, 0)]
    assert sorted(arm.orthogonal([(0, 0)])) == sorted(arm.elements())
    assert standard_armature(BIQ).radical() == [(0, 0, 0, 0)]


def test_quaternion_commutator_of_ij_and_i():
    A = symbol_algebra(Q, -1, -1)
    i, j = symbol_generators(A)
    assert commutator_scalar(i * j, i) == -1


def test_extend_forced_plane():
    assert symplectic_extend(2, standard_form(2, 1), [(1, 0)]) == [((1, 0), (0, 1))]


def test_extend_f2_four_dim_with_two_inputs():
    G = standard_form(2, 2)
    pairs = symplectic_extend(2, G, [(1, 0, 0, 0), (0, 0, 1, 0)])
    assert is_standard_symplectic(2, pairs, G)
    # brute force: the partner of e1 must pair to 1 with e1 and 0 with e3
    f1 = pairs[0][1]
    ok = [v for v in product(range(2), repeat=4)
          if bil(G, (1, 0, 0, 0), v, 2) == 1 and bil(G, (0, 0, 1, 0), v, 2) == 0]
    assert f1 in ok


def test_extend_f3_random_pairs():
    rng = random.Random(31)
    done = 0
    while done < 100:
        G = [[0] * 4 for _ in range(4)]
        for a in range(4):
            for b in range(a + 1, 4):
                G[a][b] = rng.randrange(3)
                G[b][a] = (-G[a][b]) % 3
        if rank_mod(G, 3) != 4:
            continue
        vecs = [v for v in product(range(3), repeat=4) if any(v)]
        e1 = rng.choice(vecs)
        cands = [v for v in vecs if bil(G, e1, v, 3) == 0 and rank_mod([e1, v], 3) == 2]
        e2 = rng.choice(cands)
        pairs = symplectic_extend(3, G, [e1, e2])
        assert [e for e, _ in pairs] == [e1, e2]
        assert is_standard_symplectic(3, pairs, G)
        done += 1


def test_degree4_symbol_has_one_pair_of_order_4():
    Qi = FieldTower(0, 4, ())
    A = symbol_algebra(Qi, 2, 3, 4)
    base = symplectic_base(standard_armature(A))
    assert base.orders == [4] and len(base.pairs) == 1


def test_trivial_armature_has_empty_base():
    from csa.algebra import matrix_algebra

    A = matrix_algebra(Q, 1)
    arm = Armature(A, [], [])
    assert symplectic_base(arm).pairs == []


def test_m2_armature_gives_split_symbol():
    from csa.algebra import diagonal, matrix_algebra, matrix_element

    M2 = matrix_algebra(Q, 2)
    g = diagonal(M2, [1, -1])
    f = matrix_element(M2, [[0, 1], [1, 0]])
    arm = Armature(M2, [g, f], [2, 2])
    assert verify_armature(M2, arm).passed
    dec = decompose_by_armature(M2, arm)
    s = dec.factors[0].meta["symbol"]
    assert (s["a"], s["b"]) == (1, 1) and dec.report.passed
