from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ordfix.piecewise import PiecewisePoly, as_fraction, format_fraction

small = st.fractions(min_value=-4, max_value=4, max_denominator=8)


@st.composite
def polys(draw, lo=0, hi=2, max_pieces=4, continuous=False, degree=2):
    """Random piecewise polynomials of degree <= 2 on [lo, hi]."""
    k = draw(st.integers(1, max_pieces))
    inner = sorted(set(draw(st.lists(st.fractions(lo, hi, max_denominator=16), max_size=k - 1))))
    knots = [Fraction(lo)] + [c for c in inner if lo < c < hi] + [Fraction(hi)]
    pieces = []
    for a, b in zip(knots, knots[1:]):
        coeffs = tuple(draw(st.lists(small, min_size=1, max_size=degree + 1)))
        if continuous and pieces:
            prev = PiecewisePoly(pieces)
            shift = prev.left_limit(a) - sum(c * a**i for i, c in enumerate(coeffs))
            coeffs = (coeffs[0] + shift,) + coeffs[1:]
        pieces.append((a, b, coeffs))
    return PiecewisePoly(pieces)


def candidate_points(f):
    """Oracle extremum set: knots plus every segment vertex, computed from coefficients."""
    pts = set()
    for seg in f.segments:
        pts |= {seg.lo, seg.hi}
        c = list(seg.coeffs) + [0, 0]
        if c[2] != 0:
            v = -c[1] / (2 * c[2])
            if seg.lo < v < seg.hi:
                pts.add(v)
    return pts


def value_on(f, t, side="right"):
    seg = f.segment_at(t)
    if side == "left" and t > f.interval[0]:
        return f.left_limit(t)
    return seg(t)


def test_ramp_segments_and_values():
    f = PiecewisePoly([(0, Fraction(1, 2), (0, 2)), (Fraction(1, 2), 2, (1,))])
    assert f(Fraction(1, 4)) == Fraction(1, 2)
    assert f(2) == 1 and f(0) == 0
    assert f.is_continuous()
    assert f.sup_abs() == 1


def test_rejects_gaps_and_bad_degree():
    with pytest.raises(ValueError):
        PiecewisePoly([(0, 1, (0,)), (Fraction(3, 2), 2, (0,))])
    with pytest.raises(ValueError):
        PiecewisePoly([(0, 1, (0, 0, 0, 1))])
    with pytest.raises(ValueError):
        PiecewisePoly([(1, 1, (0,))])


def test_as_fraction_uses_decimal_repr():
    assert as_fraction(0.9) == Fraction(9, 10)
    assert as_fraction("3/4") == Fraction(3, 4)
    assert format_fraction(Fraction(-3, 4)) == "-3/4"
    with pytest.raises(ValueError):
        as_fraction(float("nan"))


@given(polys())
def test_sup_abs_matches_candidate_oracle(f):
    oracle = max(max(abs(value_on(f, t)), abs(value_on(f, t, "left"))) for t in candidate_points(f))
    assert f.sup_abs() == oracle


@given(polys())
def test_sup_abs_dominates_dense_samples(f):
    samples = [Fraction(k, 64) for k in range(129)]
    assert all(abs(f(t)) <= f.sup_abs() for t in samples)


@given(polys(), polys())
def test_arithmetic_is_pointwise(f, g):
    for k in range(0, 33):
        t = Fraction(k, 16)
        assert (f + g)(t) == f(t) + g(t)
        assert (f - g)(t) == f(t) - g(t)
        assert f.scale(3)(t) == 3 * f(t)


@given(polys(continuous=True, degree=1), polys(continuous=True, degree=1))
def test_minimum_is_pointwise_min(f, g):
    h = f.minimum(g)
    pts = {Fraction(k, 32) for k in range(65)} | set(f.breakpoints) | set(g.breakpoints)
    for t in pts:
        assert h(t) == min(f(t), g(t))


def test_minimum_refuses_irrational_crossing():
    f = PiecewisePoly.constant(-2, 0, 2)
    g = PiecewisePoly([(0, 2, (0, 0, -1))])  # -t^2 meets -2 at sqrt(2)
    with pytest.raises(ValueError):
        f.minimum(g)


@given(polys())
def test_json_round_trip(f):
    assert PiecewisePoly.from_json(f.to_json()) == f


@given(polys())
def test_refinement_does_not_change_equality(f):
    g = f.refine([Fraction(1, 3), Fraction(5, 7)])
    assert g == f and hash(g) == hash(f)


def test_derivative_and_c1_check():
    f = PiecewisePoly([(-1, 0, (1, 1)), (0, 1, (1,))])
    assert f.is_continuous() and not f.is_c1()
    df = f.derivative()
    assert df.left_limit(0) == 1 and df(0) == 0
