import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from csa.acceptance import crossed
from csa.armature import Armature
from csa.crossed import (
    brauer_witness_smallscale,
    build_crossed,
    decompose_with_subfields,
    division_sampled,
    f_exponents,
    f_symmetric,
    formal_associativity,
    leading_component_unique,
    leading_term,
    lift_armature,
    nu_map,
    residue_armature,
    same_armature,
    sigma_of,
    skolem_noether_lift,
    valuation_w,
)
from csa.errors import KumNotContained, ScaleExceeded, ZeroElement
from csa.fields import FieldTower
from csa.symbols import kummer_extension, standard_armature, symbol_algebra, symbol_generators

Q = FieldTower(0, 1, ())
NAMES = ["quaternion", "biquaternion", "r2"]


@given(st.lists(st.tuples(st.integers(1, 5), st.integers(0, 4), st.integers(0, 4)), min_size=1, max_size=3))
def test_f_exponents_wrap(rows):
    n = tuple(r[0] for r in rows)
    s = tuple(r[1] % r[0] for r in rows)
    t = tuple(r[2] % r[0] for r in rows)
    eps = f_exponents(n, s, t)
    for e, a, b, m in zip(eps, s, t, n):
        assert e == (a + b) // m
    assert eps == f_exponents(n, t, s)


# -- Skolem-Noether lift ---------------------------------------------------------------

@pytest.mark.parametrize("name", NAMES + ["degree8"])
def test_lift_checks(name):
    A, M, lift, E = crossed(name)
    assert all(lift.checks.values()), lift.checks
    assert lift.C.dim * M.algebra.dim == A.dim
    assert E.dim == A.dim


def test_z_acts_as_sigma_on_generators():
    A, M, lift, _ = crossed("r2")
    for i, z in enumerate(lift.z):
        for j, x in enumerate(lift.xs):
            want = x * M.zetas[j] if i == j else x
            assert z * x * lift.z_inv[i] == want


def test_sigma_of_generators():
    A, M, lift, _ = crossed("biquaternion")
    for s in lift.sigmas:
        if any(s):
            assert sigma_of(lift, lift.z_sigma[s]) == s


# -- E' structure ---------------------------------------------------------------------------

@pytest.mark.parametrize("name", NAMES)
def test_crossed_product_associative(name):
    _, _, _, E = crossed(name)
    assert formal_associativity(E) is None
    assert f_symmetric(E)


def test_from_a_restricted_to_c_is_multiplicative():
    A, M, lift, E = crossed("biquaternion")
    for b in lift.C.basis:
        for c in lift.C.basis:
            assert E.from_A(b) * E.from_A(c) == E.from_A(b * c)


def test_quaternion_generators_in_e_prime():
    # i (x) 1 squares to -1; j (x) y squares to 3 t1
    A, M, lift, E = crossed("quaternion")
    i, j = symbol_generators(A)
    Lp = E.T
    assert E.from_A(i) ** 2 == E.scalar(Lp(-1))
    assert E.from_A(j) ** 2 == E.scalar(Lp(3) * Lp.var(E.tvars[0]))


# -- valuation ----------------------------------------------------------------------------

@pytest.mark.parametrize("name", NAMES)
def test_valuation_laws(name):
    _, _, _, E = crossed(name)
    rng = random.Random(99)
    for _ in range(60):
        s, u = E.random_element(rng), E.random_element(rng)
        if not s or not u:
            continue
        ws, wu = valuation_w(E, s), valuation_w(E, u)
        assert valuation_w(E, s * u) == ws + wu
        if s + u:
            assert not (valuation_w(E, s + u) < min(ws, wu))
        assert leading_component_unique(E, s)


def test_leading_term_strictly_dominates():
    _, _, _, E = crossed("biquaternion")
    rng = random.Random(3)
    for _ in range(40):
        s = E.random_element(rng)
        if not s:
            continue
        lt = leading_term(E, s)
        assert valuation_w(E, lt.element(E)) == valuation_w(E, s) == lt.value
        rest = s - lt.element(E)
        if rest:
            assert valuation_w(E, s) < valuation_w(E, rest)


def test_valuation_of_zero():
    _, _, _, E = crossed("quaternion")
    with pytest.raises(ZeroElement):
        valuation_w(E, E.zero())
    with pytest.raises(ZeroElement):
        leading_term(E, E.zero())


# -- armature transfer ----------------------------------------------------------------------

@pytest.mark.parametrize("name", ["quaternion", "biquaternion"])
def test_lift_and_nu_round_trip(name):
    A, M, lift, E = crossed(name)
    arm = standard_armature(A)
    res = lift_armature(E, arm)
    assert res.report.passed and res.isometric
    nu = nu_map(E, res.armature)
    assert nu.report.passed and nu.injective and nu.kum_contained
    assert same_armature(nu.armature, arm)


def test_lift_rejects_armature_missing_kummer():
    A, M, lift, E = crossed("quaternion")
    _, j = symbol_generators(A)
    with pytest.raises(KumNotContained):
        lift_armature(E, Armature(A, [j], [2]))


def test_lift_rejects_anticommuting_kummer_images():
    A = symbol_algebra(Q, -1, 3)
    i, j = symbol_generators(A)
    M = kummer_extension(Q, [-1, 3], [2, 2])
    with pytest.raises(ValueError, match="do not commute"):
        skolem_noether_lift(A, M, [i, j])


def test_same_armature_detects_different_subgroups():
    A, _, _, _ = crossed("biquaternion")
    i1, _ = symbol_generators(A.factors[0])
    assert not same_armature(Armature(A, [A.embed(0, i1)], [2]), standard_armature(A))
    assert same_armature(standard_armature(A), standard_armature(A))


@pytest.mark.parametrize("name,order", [("biquaternion", 8), ("r2", 4)])
def test_residue_armature(name, order):
    A, M, lift, E = crossed(name)
    res = lift_armature(E, standard_armature(A))
    r = residue_armature(E, res.armature)
    assert r.armature.order == lift.C.dim == order
    assert r.report.passed and r.injective and r.radical_is_kum
    assert r.w_prime_order * r.kernel_order == A.dim


# -- decomposition with prescribed subfields -------------------------------------------------------

def test_decompose_with_subfields_biquaternion():
    A, M, lift, E = crossed("biquaternion")
    dec = decompose_with_subfields(E, standard_armature(A))
    assert dec.report.passed and dec.eprime_report.passed
    assert [A.T.format(d) for d in dec.deltas] == ["-1"]
    assert [p["parameter"] for p in dec.eprime_parameters] == ["-t1"]


def test_decompose_with_subfields_quaternion():
    A, M, lift, E = crossed("quaternion")
    dec = decompose_with_subfields(E, standard_armature(A))
    assert [A.T.format(d) for d in dec.deltas] == ["3"]
    assert [p["parameter"] for p in dec.eprime_parameters] == ["3*t1"]


# -- Brauer witness and division ---------------------------------------------------------------------

def test_brauer_witness_quaternion():
    _, _, _, E = crossed("quaternion")
    w = brauer_witness_smallscale(E)
    assert w.passed and w.dim_R == 16
    assert w.to_json()["pass"]


def test_brauer_witness_scale_limit():
    _, _, _, E = crossed("degree8")
    with pytest.raises(ScaleExceeded):
        brauer_witness_smallscale(E)


def test_division_sampled():
    rng = random.Random(1)
    assert division_sampled(symbol_algebra(Q, -1, -1), rng) == "verified-sampled"
    assert division_sampled(symbol_algebra(Q, 1, -1), rng) == "zero-divisor-found"


def test_fresh_build_matches_cache():
    A, M, lift, E = crossed("quaternion")
    lift2 = skolem_noether_lift(A, M, lift.xs)
    E2 = build_crossed(lift2)
    assert E2.dim == E.dim and E2.tvars == E.tvars
    assert [z.vector() for z in lift2.z] == [z.vector() for z in lift.z]
