import random

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from csa.algebra import (
    Algebra,
    TensorAlgebra,
    algebra_from_description,
    centralizer,
    diagonal,
    element_matrix,
    inverse,
    kernel_dim_left,
    left_ideal_dim,
    matrix_algebra,
    matrix_element,
    reduced_trace,
    tensor,
    verify_isomorphism,
)
from csa.errors import DimensionMismatch, FieldMismatch, NotInvertible, ParentMismatch
from csa.fields import FieldTower
from csa.symbols import symbol_algebra, symbol_generators

Q = FieldTower(0, 1, ())
H = symbol_algebra(Q, -1, 3)
coords = st.lists(st.integers(-3, 3), min_size=4, max_size=4)


def el(A, cs):
    return A.elem({k: c for k, c in enumerate(cs)})


# -- mul ---------------------------------------------------------------------

def test_unity_is_neutral():
    x = el(H, [1, 2, -1, 3])
    assert H.one() * x == x == x * H.one()


def test_ij_equals_zeta_ji():
    i, j = symbol_generators(H)
    assert i * j == (j * i) * Q(-1)


def test_parent_mismatch():
    K = symbol_algebra(Q, -1, -1)
    with pytest.raises(ParentMismatch):
        H.one() * K.one()


@given(coords, coords, coords)
def test_associativity(a, b, c):
    x, y, z = el(H, a), el(H, b), el(H, c)
    assert (x * y) * z == x * (y * z)


def test_dense_associativity_on_basis():
    assert H.associativity_failure() is None
    assert matrix_algebra(Q, 3).associativity_failure() is None


def test_structure_constant_description():
    # the quaternions (-1,-1) written out by hand
    sc = [[0, 0, 0, "1"], [0, 1, 1, "1"], [0, 2, 2, "1"], [0, 3, 3, "1"],
          [1, 0, 1, "1"], [1, 1, 0, "-1"], [1, 2, 3, "1"], [1, 3, 2, "-1"],
          [2, 0, 2, "1"], [2, 1, 3, "-1"], [2, 2, 0, "-1"], [2, 3, 1, "1"],
          [3, 0, 3, "1"], [3, 1, 2, "1"], [3, 2, 1, "-1"], [3, 3, 0, "-1"]]
    A = algebra_from_description(Q, {"dim": 4, "basis": ["1", "i", "j", "k"], "sc": sc})
    assert A.one() == A.basis(0)
    B = symbol_algebra(Q, -1, -1)
    # i -> i, j -> j, k = ij
    imgs = [B.basis(0), B.basis(2), B.basis(1), B.basis(2) * B.basis(1)]
    assert verify_isomorphism(A, B, imgs).passed


# -- inverse -------------------------------------------------------------------

def test_inverse_of_i():
    i, _ = symbol_generators(H)
    assert inverse(i) == i * Q(-1)     # a^-1 i^(n-1) with a = -1


def test_inverse_diag():
    M2 = matrix_algebra(Q, 2)
    d = diagonal(M2, [1, -1])
    assert inverse(d) == d


def test_inverse_unipotent_against_sympy():
    M2 = matrix_algebra(Q, 2)
    x = matrix_element(M2, [[1, 1], [0, 1]])
    want = sympy.Matrix([[1, 1], [0, 1]]).inv()
    assert inverse(x) == matrix_element(M2, want.tolist())


def test_zero_divisor_not_invertible():
    M2 = matrix_algebra(Q, 2)
    with pytest.raises(NotInvertible):
        inverse(diagonal(M2, [1, 0]))


@given(coords)
def test_inverse_two_sided(a):
    x = el(H, a)
    if not x:
        return
    try:
        y = inverse(x)
    except NotInvertible:
        # zero divisors have reduced norm 0
        n = a[0] ** 2 + a[1] ** 2 - 3 * a[2] ** 2 - 3 * a[3] ** 2
        assert n == 0
        return
    assert x * y == H.one() == y * x


# -- tensor ------------------------------------------------------------------------

def test_tensor_dimension_and_commuting_factors():
    K = symbol_algebra(Q, 2, 5)
    A = tensor(H, K)
    assert A.dim == 16
    i, _ = symbol_generators(H)
    _, j2 = symbol_generators(K)
    a, b = A.embed(0, i), A.embed(1, j2)
    assert a * b == b * a


def test_tensor_field_mismatch():
    with pytest.raises(FieldMismatch):
        tensor(H, symbol_algebra(FieldTower(5, 1, ()), 2, 3))


def test_factored_matches_densified(rng):
    K = symbol_algebra(Q, 2, 5)
    A = tensor(H, K)
    D = A.densify()
    for _ in range(30):
        x = A.elem({rng.randrange(16): rng.randint(-3, 3) for _ in range(3)})
        y = A.elem({rng.randrange(16): rng.randint(-3, 3) for _ in range(3)})
        assert (x * y).vector() == (D.elem(x.c) * D.elem(y.c)).vector()


def test_tensor_associative_up_to_relabeling():
    K = symbol_algebra(Q, 2, 5)
    M = matrix_algebra(Q, 2)
    left = TensorAlgebra([TensorAlgebra([H, K]), M])
    right = TensorAlgebra([H, TensorAlgebra([K, M])])

    def img(idx):
        hk, m = left.split(idx)
        h, k = left.factors[0].split(hk)
        return right.basis(right.join((h, right.factors[1].join((k, m)))))

    assert verify_isomorphism(left, right, img).passed


# -- centralizer ---------------------------------------------------------------------

def test_centralizer_of_one_is_everything():
    assert centralizer(H, [H.one()]).dim == 4


def test_centralizer_of_i():
    i, _ = symbol_generators(H)
    C = centralizer(H, [i])
    assert C.dim == 2 and C.contains(i) and C.contains(H.one())


def test_centralizer_in_biquaternion():
    K = symbol_algebra(Q, 2, 5)
    A = tensor(H, K)
    i1, i2 = symbol_generators(H)[0], symbol_generators(K)[0]
    assert centralizer(A, [A.embed(0, i1), A.embed(1, i2)]).dim == 4


def test_center_is_scalars():
    assert centralizer(H, H.basis_elements()).dim == 1


# -- traces and ideals ----------------------------------------------------------------

def test_trace_examples():
    i, _ = symbol_generators(H)
    assert reduced_trace(i) == 0
    A = tensor(H, symbol_algebra(Q, 2, 5))
    assert reduced_trace(A.one()) == 4


@pytest.mark.parametrize("r,s", [(1, 1), (3, 1), (2, 2), (0, 4)])
def test_trace_of_sign_diagonal(r, s):
    # (r - s) * lam * deg D, over D = Q (deg 1) and D = (-1,3) (deg 2)
    lam = Q(3)
    M = matrix_algebra(Q, r + s)
    assert reduced_trace(diagonal(M, [lam] * r + [-lam] * s)) == (r - s) * lam
    MD = tensor(M, H)
    g = MD.embed(0, diagonal(M, [lam] * r + [-lam] * s))
    assert reduced_trace(g) == (r - s) * lam * 2


def test_left_ideal_dims():
    M2 = matrix_algebra(Q, 2)
    g = diagonal(M2, [1, -1])
    assert left_ideal_dim(g + M2.one()) == 2 == left_ideal_dim(g - M2.one())
    assert left_ideal_dim(H.one()) == 4


def test_counterexample_dims():
    F3 = FieldTower(3, 1, ())
    M8 = matrix_algebra(F3, 8)
    g = diagonal(M8, [1] * 7 + [-1])
    assert left_ideal_dim(g + M8.one()) == 56
    assert left_ideal_dim(g - M8.one()) == 8


@pytest.mark.parametrize("n", [2, 3, 4])
def test_left_ideal_dim_matrix_oracle(n):
    rng = random.Random(n)
    M = matrix_algebra(Q, n)
    for _ in range(10):
        rows = [[rng.choice([0, 0, 1, -1, 2]) for _ in range(n)] for _ in range(n)]
        x = matrix_element(M, rows)
        assert left_ideal_dim(x) == n * sympy.Matrix(rows).rank()
        assert left_ideal_dim(x) + kernel_dim_left(x) == M.dim


@given(coords, coords)
def test_trace_conjugation_invariant(a, b):
    x, u = el(H, a), el(H, b)
    try:
        ui = inverse(u)
    except NotInvertible:
        return
    assert reduced_trace(u * x * ui) == reduced_trace(x)


# -- isomorphism reports -----------------------------------------------------------------

def test_identity_isomorphism():
    assert verify_isomorphism(H, H, H.basis_elements()).passed


def test_swap_quaternion_isomorphism():
    A = symbol_algebra(Q, -1, 3)
    B = symbol_algebra(Q, 3, -1)
    i2, j2 = symbol_generators(B)
    # basis order is 1, j, i, ij
    imgs = [B.one(), i2, j2, j2 * i2]
    rep = verify_isomorphism(A, B, imgs)
    assert rep.passed and rep.checked_pairs == 16


def test_unity_failure():
    imgs = [H.zero()] + H.basis_elements()[1:]
    rep = verify_isomorphism(H, H, imgs)
    assert not rep.passed


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        verify_isomorphism(H, matrix_algebra(Q, 3), [])


def test_element_matrix_round_trip():
    M3 = matrix_algebra(Q, 3)
    rows = [[1, 2, 0], [0, 1, 5], [3, 0, 0]]
    assert element_matrix(matrix_element(M3, rows)) == rows
