"""Executable counterexample chains in C[0,2], C^1[-1,1], l_inf and R^2.

Every chain element is built exactly (PiecewisePoly or integer/Fraction
vectors) so the claims checked by :func:`verify_counterexample` are equalities,
not sampled approximations.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from ordfix.cone import ConeSpec, NormSpec, Space, cauchy_defect, regularity_probe
from ordfix.cone import increasing_ice_cream_sequence
from ordfix.piecewise import PiecewisePoly, as_fraction
from ordfix.report import ClaimReport

FIXTURES = ("lemma_2_4", "example_2_7", "lemma_2_8", "lemma_2_9", "lemma_2_11", "lemma_2_12")

C02 = Space(ConeSpec("pointwise_function"), NormSpec("sup_abs"))
C1 = Space(ConeSpec("c1_pair"), NormSpec("c1_sum"))
R2_ICE = Space(ConeSpec.ice_cream(), NormSpec("ell1"))

DEFAULT_LAMBDA1 = Fraction(9, 10)
DEFAULT_RATIO = Fraction(49, 100)
DEFAULT_TRUNCATION = 256


class BadParams(ValueError):
    pass


class NotAnUpperBound(ValueError):
    def __init__(self, n: int, t):
        super().__init__(f"candidate lies below x_{n} at t={t}")
        self.n = n
        self.t = t


class NotDominating(ValueError):
    def __init__(self, n: int, t: float):
        super().__init__(f"candidate does not dominate y_{n} at t={t}")
        self.n = n
        self.t = t


def _params(params) -> dict:
    return dict(params or {})


# ------------------------------------------------------------ constructors

def ramp_at_zero(n: int) -> PiecewisePoly:
    """0 at t=0, nt up to 1/n, then 1 on [1/n, 2]."""
    return PiecewisePoly([(0, Fraction(1, n), (0, n)), (Fraction(1, n), 2, (1,))])


def ramp_after_one(n: int) -> PiecewisePoly:
    """0 on [0,1], nt - n on [1, 1+1/n], 1 on [1+1/n, 2]."""
    knee = 1 + Fraction(1, n)
    pieces = [(0, 1, (0,)), (1, knee, (-n, n))]
    if knee < 2:
        pieces.append((knee, 2, (1,)))
    return PiecewisePoly(pieces)


def smoothed_corner(lam) -> PiecewisePoly:
    """C^1 function on [-1,1]: t+1, then a parabola on (-lam, 0], then flat 1 - lam/2."""
    lam = as_fraction(lam)
    top = 1 - lam / 2
    return PiecewisePoly([
        (-1, -lam, (1, 1)),
        (-lam, 0, (top, 0, -1 / (2 * lam))),
        (0, 1, (top,)),
    ])


def corner_limit() -> PiecewisePoly:
    """The pointwise limit v: t+1 on [-1,0], 1 on [0,1] (continuous, not C^1)."""
    return PiecewisePoly([(-1, 0, (1, 1)), (0, 1, (1,))])


def lambda_sequence(params, n_max: int) -> list[Fraction]:
    p = _params(params)
    lam1 = as_fraction(p.get("lambda1", DEFAULT_LAMBDA1))
    ratio = as_fraction(p.get("ratio", DEFAULT_RATIO))
    if not 0 < lam1 < 1:
        raise BadParams(f"lambda1={lam1} must lie in (0, 1)")
    if not 0 < ratio < Fraction(1, 2):
        raise BadParams(f"ratio={ratio} must lie in (0, 1/2) so that lambda_(n+1) < lambda_n / 2")
    return [lam1 * ratio**k for k in range(n_max)]


def segment_point(segment: str, theta) -> tuple[Fraction, Fraction]:
    """Point at parameter theta on the segment from (-+1/2, 1/2) to (0, 1)."""
    theta = as_fraction(theta)
    half = Fraction(1, 2)
    if segment == "left":
        return (-half + theta * half, half + theta * half)
    if segment == "right":
        return (half - theta * half, half + theta * half)
    raise BadParams(f"unknown segment {segment!r}")


def _segment_theta(n: int, p: dict) -> Fraction:
    count = p.get("count")
    if count is not None:
        if not 1 <= n <= count:
            raise BadParams(f"n={n} outside 1..{count}")
        return Fraction(n - 1, count - 1) if count > 1 else Fraction(0)
    # dyadic approach to the endpoint (0, 1)
    return 1 - Fraction(1, 2 ** (n - 1))


def make_counterexample_chain(name: str, n: int, params=None):
    """The n-th element (1-based) of the named chain."""
    if n < 1:
        raise BadParams("n must be >= 1")
    p = _params(params)
    if name in ("lemma_2_4", "lemma_2_12"):
        return ramp_at_zero(n)
    if name == "example_2_7":
        m = int(p.get("truncation", DEFAULT_TRUNCATION))
        if m < 1:
            raise BadParams("truncation must be positive")
        vec = np.zeros(m, dtype=np.int64)
        vec[: min(n, m)] = 1
        return vec
    if name == "lemma_2_8":
        return ramp_after_one(n)
    if name == "lemma_2_9":
        return smoothed_corner(lambda_sequence(p, n)[n - 1])
    if name == "lemma_2_11":
        return segment_point(p.get("segment", "left"), _segment_theta(n, p))
    raise BadParams(f"unknown counterexample {name!r}")


# ----------------------------------------------------- upper-bound witnesses

def ramp_to_one(delta) -> PiecewisePoly:
    """0 on [0, 1-delta], linear up to 1 at t=1, then 1 on [1, 2]."""
    delta = as_fraction(delta)
    start = 1 - delta
    return PiecewisePoly([
        (0, start, (0,)),
        (start, 1, (-start / delta, 1 / delta)),
        (1, 2, (1,)),
    ])


def _restrict_min(f: PiecewisePoly, lo, hi) -> tuple[Fraction, Fraction]:
    pts = []
    for seg in f.refine([lo, hi]).segments:
        if seg.lo >= lo and seg.hi <= hi:
            pts.extend(seg.extremes())
    return min(pts, key=lambda p: (p[1], p[0]))


def check_bounds_ramps_after_one(candidate: PiecewisePoly) -> None:
    """Raise NotAnUpperBound unless candidate >= x_n of the C[0,2] ramp chain for all n.

    For a continuous candidate this is exactly: candidate >= 0 on [0,1] and
    candidate >= 1 on [1,2].
    """
    if candidate.interval != (0, 2):
        raise ValueError("candidate must live on [0, 2]")
    if not candidate.is_continuous():
        raise ValueError("candidate must be continuous")
    t0, v0 = _restrict_min(candidate, Fraction(0), Fraction(1))
    if v0 < 0:
        raise NotAnUpperBound(1, t0)
    t1, v1 = _restrict_min(candidate, Fraction(1), Fraction(2))
    if v1 < 1:
        t = t1
        if t == 1:
            h = Fraction(1)
            while candidate(1 + h) >= 1:
                h /= 2
            t = 1 + h
        n = math.ceil(1 / (t - 1))
        raise NotAnUpperBound(n, t)


def improve_upper_bound_2_8(candidate: PiecewisePoly, delta, max_halvings: int = 64) -> PiecewisePoly:
    """A strictly smaller upper bound of the ramp chain {x_n} in C[0,2].

    Returns min(candidate, r_delta) where r_delta ramps from 0 at 1-delta to
    1 at t=1.  When that min coincides with the candidate, delta is halved
    until it does not; the loop terminates because candidate(1) >= 1 forces
    candidate > 0 just left of t=1.
    """
    delta = as_fraction(delta)
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    check_bounds_ramps_after_one(candidate)
    for _ in range(max_halvings):
        improved = candidate.minimum(ramp_to_one(delta))
        if improved != candidate:
            return improved
        delta /= 2
    raise ValueError("no strict improvement found")


class C1Samples(NamedTuple):
    """Value and derivative samples of a would-be C^1 function on a grid of [-1, 1]."""

    t: np.ndarray
    value: np.ndarray
    deriv: np.ndarray


def _corner_float(lam: float, t: np.ndarray):
    val = np.where(t <= -lam, t + 1, np.where(t <= 0, -t * t / (2 * lam) + 1 - lam / 2, 1 - lam / 2))
    der = np.where(t <= -lam, 1.0, np.where(t <= 0, -t / lam, 0.0))
    return val, der


def refute_upper_bound_2_9(candidate: C1Samples, tol: float = 1e-9, params=None,
                           jump_tol: float = 1e-6) -> ClaimReport:
    """Reject a sampled candidate upper bound of {y_n} inside the C^1 ball B(0, 2).

    Domination of every y_n forces value >= 1 on [0,1] and slope >= 1 on
    [-1,0).  Inside B(0,2) these become equalities, after which the slope
    just left of 0 is 1 while the finite-difference slope just right of 0 is
    0; that jump is incompatible with a continuous derivative.
    """
    t = np.asarray(candidate.t, dtype=float)
    w = np.asarray(candidate.value, dtype=float)
    dw = np.asarray(candidate.deriv, dtype=float)
    if not (t.shape == w.shape == dw.shape) or t.ndim != 1:
        raise ValueError("t, value and deriv must be 1-d arrays of equal length")
    if np.any(np.diff(t) <= 0) or t[0] < -1 or t[-1] > 1:
        raise ValueError("grid must be strictly increasing inside [-1, 1]")
    left, right = t < 0, t >= 0
    if not left.any() or right.sum() < 2:
        raise ValueError("grid needs nodes left of 0 and at least two in [0, 1]")

    p = _params(params)
    lam1 = float(as_fraction(p.get("lambda1", DEFAULT_LAMBDA1)))
    ratio = float(as_fraction(p.get("ratio", DEFAULT_RATIO)))

    # sup over n of y_n and y_n' (the envelope); violations get a concrete n
    env_val = np.where(left, t + 1, 1.0)
    env_der = np.where(left, 1.0, 0.0)
    bad = (w < env_val - tol) | (dw < env_der - tol)
    if bad.any():
        i = int(np.argmax(bad))
        lam, n = lam1, 1
        while lam > 1e-300:
            yv, yd = _corner_float(lam, t[i : i + 1])
            if yv[0] > w[i] + tol or yd[0] > dw[i] + tol:
                raise NotDominating(n, float(t[i]))
            lam *= ratio
            n += 1
        raise NotDominating(n, float(t[i]))

    report = ClaimReport()
    margin = float(min(np.min(w - env_val), np.min(dw - env_der)))
    report.add("dominates_all_y_n", "w >= y_n and w' >= y_n' on the grid", margin, True)
    vmin = float(np.min(w[right]))
    smin = float(np.min(dw[left]))
    report.add("forced_value_bound", "w >= 1 on [0, 1]", vmin, vmin >= 1 - tol)
    report.add("forced_slope_bound", "w' >= 1 on [-1, 0)", smin, smin >= 1 - tol)

    norm = float(np.max(np.abs(w)) + np.max(np.abs(dw)))
    in_ball = norm <= 2 + tol
    i0 = int(np.argmax(right))
    jump = float(dw[i0 - 1] - (w[i0 + 1] - w[i0]) / (t[i0 + 1] - t[i0]))
    if in_ball:
        dev = float(max(np.max(np.abs(w[right] - 1)), np.max(np.abs(dw[left] - 1))))
        report.add("forced_equalities", "w = 1 on [0,1] and w' = 1 on [-1,0)", dev, dev <= 2 * tol)
        report.add(
            "derivative_jump_at_0",
            f"w'(0-) - w'(0+) >= 1 - {jump_tol}",
            jump,
            jump >= 1 - jump_tol,
        )
        rejected = jump > jump_tol
        reason = "derivative_jump"
    else:
        rejected = True
        reason = "outside_ball"
    report.add(
        "candidate_rejected",
        "no element of B(0,2) dominates every y_n",
        {"reason": reason, "norm": norm, "jump": jump},
        rejected,
    )
    return report


def corner_candidate(count: int = 201) -> C1Samples:
    """Samples of v with v'(0-) = 1 and v'(0+) = 0."""
    t = np.linspace(-1.0, 1.0, count)
    t[np.isclose(t, 0.0, atol=1e-15)] = 0.0
    value = np.where(t < 0, t + 1, 1.0)
    deriv = np.where(t < 0, 1.0, 0.0)
    return C1Samples(t, value, deriv)


def random_dominating_candidate(rng: np.random.Generator, count: int = 201) -> C1Samples:
    """Random sampled candidate dominating every y_n while inside B(0, 2)."""
    t = np.linspace(-1.0, 1.0, count)
    t[np.isclose(t, 0.0, atol=1e-15)] = 0.0
    left = t < 0
    value = np.where(left, rng.uniform(np.minimum(t + 1, 1.0), 1.0), 1.0)
    deriv = np.where(left, 1.0, rng.uniform(0.0, 1.0, count))
    return C1Samples(t, value, deriv)


# ------------------------------------------------------------- verification

def _chain(name, n_max, p):
    return [make_counterexample_chain(name, n, p) for n in range(1, n_max + 1)]


def _ramp_chain_claims(report: ClaimReport, xs: list[PiecewisePoly], tail_start: int):
    n_max = len(xs)
    report.add("continuous", "x_n in C[0,2]", n_max, all(x.is_continuous() for x in xs))
    norms = sorted({C02.norm_of(x) for x in xs})
    report.add("norm_equals_1", "||x_n|| = 1 for all n", norms, norms == [1])
    report.add(
        "increasing",
        "x_n <= x_(n+1)",
        n_max - 1,
        all(C02.leq(a, b) for a, b in zip(xs, xs[1:])),
    )
    errors = [
        C02.dist(xs[n - 1], xs[m - 1]) - (1 - Fraction(m, n))
        for n in range(2, n_max + 1)
        for m in range(1, n)
    ]
    worst = max(abs(e) for e in errors)
    report.add("pairwise_distance", "||x_n - x_m|| = 1 - m/n for m < n", worst, worst == 0)
    defect = cauchy_defect(C02, xs, tail_start)
    expected = 1 - Fraction(tail_start + 1, n_max)
    report.add(
        "not_cauchy",
        f"tail defect from n={tail_start + 1} equals {expected} >= 1/2",
        defect,
        defect == expected and defect >= Fraction(1, 2),
    )


def _verify_ramp_at_zero(n_max, p):
    report = ClaimReport()
    xs = _chain("lemma_2_4", n_max, p)
    _ramp_chain_claims(report, xs, n_max // 2 - 1)
    v = PiecewisePoly.constant(1, 0, 2)
    report.add("v_dominates", "x_n <= v = 1", n_max, all(C02.leq(x, v) for x in xs))
    # any continuous upper bound must be >= 1 on (0,2], hence at 0; ramps that
    # dip to 0 at t=0 are never upper bounds
    witnesses = []
    for k in range(1, 11):
        delta = Fraction(1, 2**k)
        ramp = PiecewisePoly([(0, delta, (0, 1 / delta)), (delta, 2, (1,))])
        n = next(n for n in range(1, 2**k + 2) if not C02.leq(ramp_at_zero(n), ramp))
        witnesses.append((str(delta), n))
    report.add(
        "ramp_candidates_not_upper_bounds",
        "every ramp below v fails to bound some x_n",
        witnesses,
        len(witnesses) == 10,
    )
    pts = [Fraction(0)] + [Fraction(1, j) for j in range(1, n_max + 1)]
    last = xs[-1]
    ok = last(0) == 0 and all(last(s) == 1 for s in pts[1:])
    report.add("pointwise_limit_u", "x_n(0) = 0, x_n(t) -> 1 for t > 0", len(pts), ok)
    probe = regularity_probe(C02, xs, v, mode="regular", tail_start=n_max // 2 - 1, tol=0)
    report.add(
        "order_bounded_not_convergent",
        "regularity probe: bounded by v, defect bounded away from 0",
        probe["tail_cauchy_defect"].measured,
        not probe["tail_cauchy_defect"].passed,
    )
    return report


def _verify_unit_vectors(n_max, p):
    m = int(p.get("truncation", DEFAULT_TRUNCATION))
    if n_max > m:
        raise BadParams(f"n_max={n_max} exceeds truncation {m}")
    space = Space(ConeSpec.componentwise(m), NormSpec("sup_abs"))
    xs = _chain("example_2_7", n_max, p)
    report = ClaimReport()
    report.add(
        "increasing", "x_n <= x_(n+1)", n_max - 1, all(space.leq(a, b) for a, b in zip(xs, xs[1:]))
    )
    dists = {int(space.dist(xs[i], xs[j])) for i in range(n_max) for j in range(i + 1, n_max)}
    report.add("pairwise_distance_1", "||x_n - x_m|| = 1 for n != m", sorted(dists), dists == {1})
    family = np.vstack(_chain("example_2_7", m, p))
    sup = family.max(axis=0)
    w = np.ones(m, dtype=np.int64)
    report.add(
        "componentwise_sup_is_w",
        "componentwise sup of {x_n} = all-ones on the truncation",
        int(sup.min()),
        bool(np.array_equal(sup, w)),
    )
    # each coordinate k is attained by x_k, so every upper bound dominates w
    attained = all(family[k, k] == 1 for k in range(m))
    report.add("w_is_least", "coordinate k of x_k equals 1", m, attained)
    defect = cauchy_defect(space, xs, n_max // 2)
    report.add("not_cauchy", "tail defect = 1", defect, defect == 1)
    return report


def _verify_ramp_after_one(n_max, p):
    report = ClaimReport()
    xs = _chain("lemma_2_8", n_max, p)
    _ramp_chain_claims(report, xs, n_max // 2 - 1)
    v = PiecewisePoly.constant(1, 0, 2)
    u = PiecewisePoly.constant(-1, 0, 2)
    report.add(
        "bi_inductive_ball",
        "u <= x_n <= v with ||u|| = ||v|| = 1",
        n_max,
        all(C02.leq(u, x) and C02.leq(x, v) for x in xs) and C02.norm_of(u) == C02.norm_of(v) == 1,
    )
    rounds = int(p.get("rounds", 5))
    current, delta = v, Fraction(1, 2)
    depth = 0
    for _ in range(rounds):
        nxt = improve_upper_bound_2_8(current, delta)
        bounds = all(C02.leq(x, nxt) for x in xs)
        below = C02.leq(nxt, current) and nxt != current
        in_ball = C02.norm_of(nxt) <= 1
        if not (bounds and below and in_ball):
            break
        depth += 1
        current, delta = nxt, delta / 2
    report.add(
        "no_least_upper_bound",
        f"{rounds} successive strict improvements of the upper bound v",
        depth,
        depth == rounds,
    )
    return report


def _verify_smoothed_corner(n_max, p):
    report = ClaimReport()
    lams = lambda_sequence(p, n_max)
    ys = [smoothed_corner(lam) for lam in lams]
    report.add("c1", "y_n in C^1[-1,1]", n_max, all(y.is_c1() for y in ys))
    errs = [C1.norm_of(y) - (2 - lam / 2) for y, lam in zip(ys, lams)]
    worst = max(abs(e) for e in errs)
    report.add("norm", "||y_n|| = 2 - lambda_n/2", worst, worst == 0)
    report.add("in_ball", "||y_n|| <= 2", n_max, all(C1.norm_of(y) <= 2 for y in ys))
    report.add(
        "increasing",
        "y_n <= y_(n+1) (value and derivative)",
        n_max - 1,
        all(C1.leq(a, b) for a, b in zip(ys, ys[1:])),
    )
    gaps = []
    ok = True
    for k in range(n_max - 1):
        a, b, la, lb = ys[k], ys[k + 1], lams[k], lams[k + 1]
        bound = 1 - lb / la
        gap = C1.dist(b, a)
        slope_diff = b.derivative()(-lb) - a.derivative()(-lb)
        ok &= gap >= bound > Fraction(1, 2) and slope_diff == bound
        gaps.append(gap)
    report.add(
        "consecutive_gap",
        "||y_(n+1) - y_n|| >= 1 - lambda_(n+1)/lambda_n > 1/2",
        min(gaps) if gaps else None,
        ok,
    )
    v = corner_limit()
    diffs = [v - y for y in ys]
    lim_ok = all(d.min_value()[1] >= 0 and d.sup_abs() == lam / 2 for d, lam in zip(diffs, lams))
    report.add("pointwise_limit_v", "0 <= v - y_n <= lambda_n/2, attained", n_max, lim_ok)
    jump = v.derivative().left_limit(0) - v.derivative()(0)
    report.add("v_not_c1", "v' jumps by 1 at t=0", jump, v.is_continuous() and jump == 1)
    refute = refute_upper_bound_2_9(corner_candidate(), params=p)
    report.add(
        "no_upper_bound_in_ball",
        "the v-based candidate is rejected",
        refute["candidate_rejected"].measured,
        refute.passed,
    )
    rng = np.random.default_rng(int(p.get("seed", 0)))
    trials = int(p.get("candidates", 100))
    jumps = []
    for _ in range(trials):
        rep = refute_upper_bound_2_9(random_dominating_candidate(rng), params=p)
        jumps.append(rep["derivative_jump_at_0"].measured if rep.passed else -1.0)
    report.add(
        "random_candidates_rejected",
        f"{trials} random dominating candidates rejected with jump >= 1 - 1e-6",
        min(jumps) if jumps else None,
        all(j >= 1 - 1e-6 for j in jumps),
    )
    return report


def _verify_ice_cream(n_max, p):
    report = ClaimReport()
    count = int(p.get("count", 11))
    for seg in ("left", "right"):
        pts = [make_counterexample_chain("lemma_2_11", k, {"segment": seg, "count": count})
               for k in range(1, count + 1)]
        comparable = all(R2_ICE.leq(a, b) for i, a in enumerate(pts) for b in pts[i + 1 :])
        report.add(f"{seg}_chain", "points are pairwise comparable", count, comparable)
        norms = sorted({R2_ICE.norm_of(x) for x in pts})
        report.add(f"{seg}_norm_1", "ell1 norm = 1 on the segment", norms, norms == [1])
        positive = all(R2_ICE.leq((0, 0), x) for x in pts)
        report.add(f"{seg}_positive", "0 <= x", count, positive)
    x, y = (Fraction(-1, 2), Fraction(1, 2)), (Fraction(0), Fraction(1))
    strict = R2_ICE.leq(x, y) and not R2_ICE.leq(y, x)
    report.add(
        "equal_norm_strict_pair",
        "0 <= (-1/2,1/2) < (0,1) with equal norms",
        [R2_ICE.norm_of(x), R2_ICE.norm_of(y)],
        strict and R2_ICE.norm_of(x) == R2_ICE.norm_of(y) == 1,
    )
    rng = np.random.default_rng(int(p.get("seed", 0)))
    n_seq = int(p.get("sequences", 20))
    length = max(int(p.get("length", 2000)), 3)
    worst = 0.0
    for _ in range(n_seq):
        seq = increasing_ice_cream_sequence(rng, length, 1.0)
        probe = regularity_probe(R2_ICE, list(seq), 1.0, mode="fully_regular", tol=1e-6)
        worst = max(worst, probe["tail_cauchy_defect"].measured)
    report.add(
        "fully_regular_probe",
        "random increasing ell1-bounded sequences have tail defect < 1e-6",
        worst,
        worst < 1e-6,
    )
    return report


def _verify_normal_interval(n_max, p):
    report = ClaimReport()
    rng = np.random.default_rng(int(p.get("seed", 0)))
    # random piecewise-linear pairs 0 <= x <= y in C[0,2] on dyadic breakpoints
    ratio = Fraction(0)
    knots = [Fraction(k, 4) for k in range(9)]
    for _ in range(int(p.get("trials", 50))):
        xv = [Fraction(int(a), 8) for a in rng.integers(0, 9, len(knots))]
        yv = [a + Fraction(int(b), 8) for a, b in zip(xv, rng.integers(0, 9, len(knots)))]
        if max(yv) == 0:
            continue
        x = PiecewisePoly(_interp(knots, xv))
        y = PiecewisePoly(_interp(knots, yv))
        assert C02.leq(PiecewisePoly.constant(0, 0, 2), x) and C02.leq(x, y)
        ratio = max(ratio, C02.norm_of(x) / C02.norm_of(y))
    report.add("normal", "0 <= x <= y implies ||x|| <= ||y|| (sampled)", ratio, ratio <= 1)
    sub = _verify_ramp_after_one(n_max, p)
    report.add(
        "interval_not_chain_complete",
        "the ramp chain in [u, v] has no least upper bound",
        sub["no_least_upper_bound"].measured,
        sub["bi_inductive_ball"].passed and sub["no_least_upper_bound"].passed,
    )
    sub = _verify_ramp_at_zero(n_max, p)
    report.add(
        "not_regular",
        "an order-bounded increasing sequence fails to converge",
        sub["not_cauchy"].measured,
        sub["order_bounded_not_convergent"].passed,
    )
    return report


def _interp(knots, values):
    pieces = []
    for (a, fa), (b, fb) in zip(zip(knots, values), zip(knots[1:], values[1:])):
        slope = (fb - fa) / (b - a)
        pieces.append((a, b, (fa - slope * a, slope)))
    return pieces


_VERIFIERS = {
    "lemma_2_4": _verify_ramp_at_zero,
    "example_2_7": _verify_unit_vectors,
    "lemma_2_8": _verify_ramp_after_one,
    "lemma_2_9": _verify_smoothed_corner,
    "lemma_2_11": _verify_ice_cream,
    "lemma_2_12": _verify_normal_interval,
}

DEFAULT_N_MAX = {
    "lemma_2_4": 64,
    "example_2_7": 64,
    "lemma_2_8": 64,
    "lemma_2_9": 16,
    "lemma_2_11": 11,
    "lemma_2_12": 32,
}


def verify_counterexample(name: str, n_max: int | None = None, params=None) -> ClaimReport:
    """Check every claim attached to the named counterexample."""
    if name not in _VERIFIERS:
        raise BadParams(f"unknown counterexample {name!r}")
    n_max = DEFAULT_N_MAX[name] if n_max is None else int(n_max)
    if n_max < 3:
        raise BadParams("n_max must be >= 3")
    return _VERIFIERS[name](n_max, _params(params))
