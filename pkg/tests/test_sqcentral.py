import random

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from csa.algebra import diagonal, inverse, matrix_algebra, matrix_element, tensor
from csa.errors import (
    BudgetExhausted,
    NotAWitness,
    NotSquareCentral,
    UnknownIndex,
    WrongCharacteristic,
)
from csa.fields import FieldTower
from csa.sqcentral import (
    IN,
    NOT_IN,
    UNKNOWN,
    LaurentQuaternion,
    analyze,
    anticommuting_space,
    classify_square_central,
    find_anticommuting_square_central,
    laurent_obstruction_reduce,
    membership_nonsquare_case,
    membership_square_case,
    random_center_element,
    random_laurent,
    square_value,
    trace_criterion_char0,
    verify_quaternion_witness,
)
from csa.symbols import symbol_algebra, symbol_generators

Q = FieldTower(0, 1, ())
F3 = FieldTower(3, 1, ())
D = symbol_algebra(Q, -1, -1)


# -- classification -----------------------------------------------------------------------

def test_classify_cases():
    M2 = matrix_algebra(Q, 2)
    assert classify_square_central(M2, diagonal(M2, [1, -1])).case == "InSquare"
    assert classify_square_central(M2, matrix_element(M2, [[0, 1], [2, 0]])).case == "NonSquare"


def test_square_value_errors():
    M2 = matrix_algebra(Q, 2)
    with pytest.raises(NotSquareCentral):
        square_value(M2.scalar(3))
    with pytest.raises(NotSquareCentral):
        square_value(diagonal(M2, [1, 2]))
    with pytest.raises(NotSquareCentral):
        square_value(matrix_element(M2, [[0, 1], [0, 0]]))


# -- square case -------------------------------------------------------------------------------

def test_counterexample_over_f3():
    M8 = matrix_algebra(F3, 8)
    g = diagonal(M8, [1] * 7 + [-1])
    rep = membership_square_case(M8, g, lam=F3.one)
    assert rep.trace == F3.zero               # 7 - 1 = 6 = 0 in F3
    assert rep.dims == (8, 56)
    assert rep.verdict == NOT_IN


def test_trace_criterion_rejects_positive_characteristic():
    M2 = matrix_algebra(F3, 2)
    with pytest.raises(WrongCharacteristic):
        trace_criterion_char0(M2, diagonal(M2, [1, -1]))


def test_characteristic_two_rejected():
    F2 = FieldTower(2, 1, ())
    M2 = matrix_algebra(F2, 2)
    with pytest.raises(WrongCharacteristic):
        membership_square_case(M2, matrix_element(M2, [[1, 1], [0, 1]]), lam=F2.one)


@pytest.mark.parametrize("signs", [(1, -1), (1, 1, -1, -1), (1, -1, 1, -1, -1, 1), (1, 1, 1, -1), (1, -1, -1)])
def test_sign_diagonals_against_rank_oracle(signs):
    n = len(signs)
    M = matrix_algebra(Q, n)
    g = diagonal(M, list(signs))
    rep = membership_square_case(M, g)
    lam = rep.value
    S = sympy.diag(*signs)
    want = (n * (S - lam * sympy.eye(n)).rank(), n * (S + lam * sympy.eye(n)).rank())
    assert rep.dims == want
    expected = IN if signs.count(1) == signs.count(-1) else NOT_IN
    assert rep.verdict == expected
    assert trace_criterion_char0(M, g).verdict == expected
    if expected == IN:
        assert verify_quaternion_witness(g, rep.witness)


@given(st.lists(st.sampled_from([1, -1]), min_size=2, max_size=4), st.integers(0, 10 ** 6))
def test_conjugation_preserves_verdict(signs, seed):
    n = len(signs)
    if abs(sum(signs)) == n:
        return   # scalar
    rng = random.Random(seed)
    M = matrix_algebra(Q, n)
    g = diagonal(M, signs)
    while True:
        P = matrix_element(M, [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)])
        if sympy.Matrix([[P.c.get(i * n + j, 0) for j in range(n)] for i in range(n)]).det():
            break
    h = P * g * inverse(P)
    a, b = membership_square_case(M, g), membership_square_case(M, h)
    assert a.verdict == b.verdict and a.dims == b.dims


def test_square_case_in_quaternion_division_algebra():
    # 1 (x) diag(1,-1) has equal eigenspace dimensions; no matrix presentation, so no witness
    A = tensor(D, matrix_algebra(Q, 2))
    g = A.embed(1, diagonal(A.factors[1], [1, -1]))
    rep = membership_square_case(A, g)
    assert rep.verdict == IN and rep.witness is None
    assert trace_criterion_char0(A, g).verdict == IN


# -- nonsquare case -----------------------------------------------------------------------------

def test_nonsquare_in_m2_has_witness():
    M2 = matrix_algebra(Q, 2)
    g = matrix_element(M2, [[1, 1], [1, -1]])      # g^2 = 2
    rep = membership_nonsquare_case(M2, g)
    assert rep.verdict == IN
    assert rep.witness is not None and verify_quaternion_witness(g, rep.witness)


def test_nonsquare_in_division_quaternion():
    i, j = symbol_generators(D)
    rep = membership_nonsquare_case(D, i)
    assert rep.split_verdict == NOT_IN           # deg/ind = 1
    full = analyze(D, i)
    assert full.verdict == IN and verify_quaternion_witness(i, full.witness)


def test_unknown_index():
    A = symbol_algebra(Q, -1, 3)
    i, _ = symbol_generators(A)
    with pytest.raises(UnknownIndex):
        membership_nonsquare_case(A, i)
    assert membership_nonsquare_case(A, i, index=2).split_verdict == NOT_IN


# -- anticommuting search -------------------------------------------------------------------------

def test_anticommuting_space_dimension():
    i, _ = symbol_generators(D)
    W = anticommuting_space(D, i)
    assert len(W) == 2
    assert all(i * w == -(w * i) for w in W)


def test_exhaustive_search_over_f3():
    M2 = matrix_algebra(F3, 2)
    g = diagonal(M2, [1, -1])
    y = find_anticommuting_square_central(M2, g)
    assert verify_quaternion_witness(g, y)


def test_exhaustive_search_proves_absence():
    M3 = matrix_algebra(F3, 3)
    g = diagonal(M3, [1, 1, -1])
    # dims differ so no witness exists; exhaustive enumeration must agree
    assert find_anticommuting_square_central(M3, g) is None
    assert analyze(M3, g).verdict == NOT_IN


def test_budget_exhaustion():
    M4 = matrix_algebra(Q, 4)
    g = diagonal(M4, [1, 1, 1, -1])
    with pytest.raises(BudgetExhausted):
        find_anticommuting_square_central(M4, g, budget=20)


def test_analyze_unknown_when_budget_runs_out():
    A = symbol_algebra(Q, -1, 3)
    x = symbol_generators(A)[0] + symbol_generators(A)[1]    # x^2 = 2 nonsquare
    rep = analyze(A, x, budget=0)
    assert rep.verdict in (IN, UNKNOWN)


# -- Laurent quaternions ---------------------------------------------------------------------------

laurent_seed = st.integers(0, 10 ** 6)


def test_laurent_generators():
    one = D.one()
    I = LaurentQuaternion.monomial(D, one, 1, 0)
    J = LaurentQuaternion.monomial(D, one, 0, 1)
    assert I * I == LaurentQuaternion.scalar(D, 1, 2, 0)
    assert I * J == -(J * I)


@given(laurent_seed)
def test_laurent_associative(seed):
    rng = random.Random(seed)
    f, g, h = (random_laurent(D, rng) for _ in range(3))
    assert (f * g) * h == f * (g * h)


@given(laurent_seed)
def test_leading_term_laws(seed):
    rng = random.Random(seed)
    f, g = random_laurent(D, rng), random_laurent(D, rng)
    if f and g:
        assert (f * g).leading() == f.leading() * g.leading()
    d = D.elem({m: rng.randint(-3, 3) for m in range(4)}) or D.one()
    assert LaurentQuaternion.const(D, d).leading() == LaurentQuaternion.const(D, d)
    z = random_center_element(D, rng)
    if z:
        assert z.leading().in_center_field()


def test_obstruction_reduce_witness():
    i, j = symbol_generators(D)
    # y = j + (ij) i_L: both parts anticommute with i and with each other, so y^2 lies in L
    y = LaurentQuaternion.const(D, j) + LaurentQuaternion.monomial(D, i * j, 1, 0)
    d = laurent_obstruction_reduce(D, i, y)
    assert (d * d).scalar_value() and i * d == -(d * i)


@pytest.mark.parametrize("make", [
    lambda i, j: LaurentQuaternion.const(D, j) + LaurentQuaternion.monomial(D, i, 1, 0),
    lambda i, j: LaurentQuaternion.const(D, j) + LaurentQuaternion.monomial(D, j, 1, 0),
    lambda i, j: LaurentQuaternion.const(D, i),
    lambda i, j: LaurentQuaternion(D),
])
def test_obstruction_reduce_rejects(make):
    i, j = symbol_generators(D)
    with pytest.raises(NotAWitness):
        laurent_obstruction_reduce(D, i, make(i, j))


# -- worked examples ------------------------------------------------------------------------

def test_m2_over_division_quaternion_nonsquare():
    A = tensor(matrix_algebra(Q, 2), D)
    i, _ = symbol_generators(D)
    g = A.embed(1, i)                            # g^2 = -1
    rep = membership_nonsquare_case(A, g)
    assert rep.split_verdict == IN              # deg/ind = 4/2
    if rep.witness is not None:
        assert verify_quaternion_witness(g, rep.witness)


def test_m2_f3_anticommuting_search():
    M2 = matrix_algebra(F3, 2)
    x = matrix_element(M2, [[0, 1], [2, 0]])
    y = find_anticommuting_square_central(M2, x)
    assert verify_quaternion_witness(x, y)


def test_biquaternion_over_f5t_search():
    F5t = FieldTower(5, 1, ("t",))
    A = tensor(symbol_algebra(F5t, 2, 3), symbol_algebra(F5t, 2, F5t.var("t")))
    x = A.embed(0, symbol_generators(A.factors[0])[0])      # x^2 = 2, a nonsquare mod 5
    y = find_anticommuting_square_central(A, x)
    assert verify_quaternion_witness(x, y)


def test_reducer_on_constant_witness():
    i, j = symbol_generators(D)
    assert laurent_obstruction_reduce(D, i, LaurentQuaternion.const(D, j)) == j


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_eigenspace_dims_sum_to_dim(n):
    rng = random.Random(n)
    M = matrix_algebra(F3, n)
    for _ in range(5):
        signs = [rng.choice([1, -1]) for _ in range(n)]
        if abs(sum(signs)) == n:
            continue
        rep = membership_square_case(M, diagonal(M, signs), lam=F3.one)
        assert sum(rep.dims) == M.dim


def test_j_plus_ij_t1_is_a_witness():
    # y^2 = -1 - t1^2 lies in L and y anticommutes with i
    i, j = symbol_generators(D)
    y = LaurentQuaternion.const(D, j) + LaurentQuaternion.monomial(D, i * j, 2, 0)
    assert (y * y).in_center_field()
    assert laurent_obstruction_reduce(D, i, y) == j
