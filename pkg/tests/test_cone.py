import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ordfix import counterexamples as cx
from ordfix.cone import (
    BoundViolated,
    ConeSpec,
    DimensionMismatch,
    EmptySample,
    NormSpec,
    NotConvergent,
    NotIncreasing,
    Space,
    cauchy_defect,
    cone_member,
    cone_pair_sampler,
    fixed_pairs_sampler,
    increasing_ice_cream_sequence,
    norm_eval,
    normality_constant,
    order_leq,
    regularity_probe,
    sup_of_increasing_sequence,
)
from ordfix.piecewise import PiecewisePoly

ICE = ConeSpec.ice_cream()
ints = st.integers(-20, 20)
vec2 = st.tuples(ints, ints)
fracs = st.fractions(-5, 5, max_denominator=12)


# ---------------------------------------------------------------- membership

@pytest.mark.parametrize("v, member", [
    ((0.5, 0.5), True),
    ((1, 0.5), False),
    ((Fraction(-1, 2), Fraction(1, 2)), True),
    ((0, 0), True),
])
def test_ice_cream_membership(v, member):
    assert cone_member(ICE, v) is member


def test_function_cone_on_ramp_differences():
    cone = ConeSpec("pointwise_function")
    d = cx.ramp_at_zero(2) - cx.ramp_at_zero(1)
    assert cone_member(cone, d)
    assert not cone_member(cone, -d)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        cone_member(ConeSpec.componentwise(3), (1, 2))
    with pytest.raises(DimensionMismatch):
        cone_member(ConeSpec("pointwise_function"), (1, 2))
    with pytest.raises(DimensionMismatch):
        order_leq((1, 2), (1, 2, 3), ConeSpec.componentwise(2))


@given(st.lists(st.tuples(fracs, st.fractions(0, 5, max_denominator=12)), min_size=2, max_size=5),
       st.fractions(0, 4, max_denominator=7))
def test_ice_cream_is_a_convex_cone(points, alpha):
    members = [(s, t) for s, t in points if abs(s) <= t]
    for a, b in itertools.combinations(members, 2):
        assert cone_member(ICE, (a[0] + b[0], a[1] + b[1]))
    for a in members:
        assert cone_member(ICE, (alpha * a[0], alpha * a[1]))


# ------------------------------------------------------------------- order

@given(vec2, vec2, vec2, st.integers(1, 9))
def test_translation_and_scaling_invariance(x, y, z, alpha):
    for cone in (ICE, ConeSpec.componentwise(2)):
        base = order_leq(x, y, cone)
        shifted = order_leq(tuple(a + c for a, c in zip(x, z)), tuple(b + c for b, c in zip(y, z)), cone)
        scaled = order_leq(tuple(alpha * a for a in x), tuple(alpha * b for b in y), cone)
        assert base == shifted == scaled


@given(vec2, vec2, vec2)
def test_exact_order_is_a_partial_order(x, y, z):
    for cone in (ICE, ConeSpec.componentwise(2)):
        assert order_leq(x, x, cone)
        if order_leq(x, y, cone) and order_leq(y, x, cone):
            assert x == y
        if order_leq(x, y, cone) and order_leq(y, z, cone):
            assert order_leq(x, z, cone)


def test_float_antisymmetry_up_to_tolerance():
    x = np.array([0.3, 0.7])
    y = x + 5e-13
    cone = ConeSpec.componentwise(2)
    assert order_leq(x, y, cone) and order_leq(y, x, cone)
    assert norm_eval(y - x, NormSpec("sup_abs")) <= cone.tolerance


@given(st.lists(st.floats(0, 10), min_size=3, max_size=3),
       st.lists(st.floats(0, 10), min_size=3, max_size=3))
def test_monotone_norms_on_componentwise_cone(a, b):
    x = np.array(a)
    y = x + np.array(b)
    for norm in (NormSpec("sup_abs"), NormSpec("ell1"), NormSpec("ellp", p=3)):
        assert norm_eval(x, norm) <= norm_eval(y, norm) * (1 + 1e-12) + 1e-12


# ------------------------------------------------------------------- norms

def test_norm_examples():
    assert norm_eval((Fraction(-1, 2), Fraction(1, 2)), NormSpec("ell1")) == 1
    assert norm_eval(cx.ramp_at_zero(7), NormSpec("sup_abs")) == 1
    y = cx.smoothed_corner(Fraction(1, 2))
    assert norm_eval(y, NormSpec("c1_sum")) == 2 - Fraction(1, 4)
    w = NormSpec("lp_quadrature", p=2, weights=[0.5, 0.5])
    assert norm_eval([1.0, 1.0], w) == pytest.approx(1.0)


# ------------------------------------------------------------------ defect

def brute_defect(space, seq):
    return max(space.dist(a, b) for a, b in itertools.combinations(seq, 2))


@given(st.integers(0, 2**32 - 1), st.sampled_from(["sup_abs", "ell1"]), st.integers(1, 6))
def test_vectorised_defect_matches_pairwise(seed, norm, dim):
    rng = np.random.default_rng(seed)
    seq = list(rng.normal(size=(12, dim)))
    space = Space(ConeSpec.componentwise(dim), NormSpec(norm))
    assert cauchy_defect(space, seq) == pytest.approx(brute_defect(space, seq), rel=1e-12, abs=1e-15)


def test_ramp_defect_closed_form():
    xs = [cx.ramp_at_zero(n) for n in range(1, 17)]
    for m in range(1, 16):
        assert cauchy_defect(cx.C02, xs, m - 1) == 1 - Fraction(m, 16)


def test_ice_cream_tail_bound():
    # along an increasing chain |s_j - s_i| <= t_j - t_i, so the ell1 distance is at most 2 (t_j - t_i)
    rng = np.random.default_rng(3)
    for _ in range(50):
        seq = increasing_ice_cream_sequence(rng, 300, 1.0)
        assert np.all(np.abs(seq).sum(axis=1) <= 1 + 1e-12)
        for k in (0, 50, 150, 250):
            d = cauchy_defect(cx.R2_ICE, list(seq), k)
            assert d <= 2 * (seq[-1, 1] - seq[k, 1]) + 1e-12


# -------------------------------------------------------------- regularity

def test_probe_constant_sequence():
    seq = [np.array([0.2, 0.4])] * 5
    rep = regularity_probe(cx.R2_ICE, seq, 1.0, mode="fully_regular")
    assert rep["tail_cauchy_defect"].measured == 0 and rep.passed


def test_probe_ramp_chain_not_cauchy():
    xs = [cx.ramp_at_zero(n) for n in range(1, 33)]
    rep = regularity_probe(cx.C02, xs, PiecewisePoly.constant(1, 0, 2), mode="regular", tail_start=0)
    assert rep["tail_cauchy_defect"].measured == 1 - Fraction(1, 32)
    assert not rep["tail_cauchy_defect"].passed


def test_probe_errors():
    space = Space(ConeSpec.componentwise(1), NormSpec("sup_abs"))
    with pytest.raises(NotIncreasing) as exc:
        regularity_probe(space, [np.array([0.0]), np.array([1.0]), np.array([0.5])], np.array([2.0]))
    assert exc.value.index == 1
    with pytest.raises(BoundViolated):
        regularity_probe(space, [np.array([0.0]), np.array([1.0]), np.array([3.0])], np.array([2.0]))
    with pytest.raises(BoundViolated):
        regularity_probe(space, [np.array([0.0]), np.array([1.0]), np.array([3.0])], 2.0,
                         mode="fully_regular")


# -------------------------------------------------------------------- sups

def test_sup_of_segment_chain_is_apex():
    pts = [cx.make_counterexample_chain("lemma_2_11", n) for n in range(1, 60)]
    limit, rep = sup_of_increasing_sequence(cx.R2_ICE, pts, [(0, 1), (0, 2), (1, 0)], tol=1e-8)
    assert float(limit[0]) == pytest.approx(0, abs=1e-8) and float(limit[1]) == pytest.approx(1, abs=1e-8)
    assert rep.passed
    assert "limit_below_candidate_0" in rep and "limit_below_candidate_1" in rep


def test_sup_of_constant_sequence():
    c = (Fraction(1), Fraction(2))
    limit, rep = sup_of_increasing_sequence(cx.R2_ICE, [c] * 4)
    assert limit == c and rep.passed


def test_sup_of_truncated_unit_vectors():
    M = 32
    space = Space(ConeSpec.componentwise(M), NormSpec("sup_abs"))
    xs = [cx.make_counterexample_chain("example_2_7", n, {"truncation": M}) for n in range(1, 2 * M + 1)]
    limit, rep = sup_of_increasing_sequence(space, xs)
    assert np.array_equal(limit, np.ones(M, dtype=np.int64)) and rep.passed


def test_sup_refuses_divergent_sequence():
    xs = [cx.ramp_at_zero(n) for n in range(1, 9)]
    with pytest.raises(NotConvergent):
        sup_of_increasing_sequence(cx.C02, xs)


# --------------------------------------------------------------- normality

def test_normality_examples():
    cone = ConeSpec.componentwise(2)
    ell1 = NormSpec("ell1")
    assert normality_constant(cone, ell1, cone_pair_sampler(cone), 500) <= 1
    eq = normality_constant(cone, ell1, cone_pair_sampler(cone, equal_fraction=1.0), 20)
    assert eq == pytest.approx(1.0, abs=1e-15)
    pair = ((Fraction(-1, 2), Fraction(1, 2)), (Fraction(0), Fraction(1)))
    est = normality_constant(ICE, ell1, fixed_pairs_sampler([pair], cone_pair_sampler(ICE)), 50)
    assert est >= 1


def test_normality_needs_samples():
    cone = ConeSpec.componentwise(2)
    with pytest.raises(EmptySample):
        normality_constant(cone, NormSpec("ell1"), cone_pair_sampler(cone), 0)
