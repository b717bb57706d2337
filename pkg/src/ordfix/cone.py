"""Cone-induced orders, norms and sequence probes on concrete ordered spaces.

Elements are either vectors (tuples/lists/ndarrays) or :class:`PiecewisePoly`
functions.  Vectors whose entries are all ints/Fractions are handled exactly;
anything containing a float is compared with the cone's tolerance.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from ordfix.piecewise import PiecewisePoly, as_fraction
from ordfix.report import ClaimReport

DEFAULT_TOLERANCE = 1e-12

CONE_KINDS = ("componentwise", "ice_cream_2d", "pointwise_function", "c1_pair")
NORM_KINDS = ("sup_abs", "ell1", "ellp", "c1_sum", "lp_quadrature")


class DimensionMismatch(ValueError):
    pass


class EmptySample(ValueError):
    pass


class InvalidSample(ValueError):
    pass


class NotIncreasing(ValueError):
    def __init__(self, index: int):
        super().__init__(f"sequence is not increasing at index {index}")
        self.index = index


class BoundViolated(ValueError):
    def __init__(self, index: int):
        super().__init__(f"bound violated at index {index}")
        self.index = index


class NotConvergent(ValueError):
    def __init__(self, defect):
        super().__init__(f"tail Cauchy defect {float(defect):.3e} above tolerance")
        self.defect = defect


@dataclass(frozen=True)
class ConeSpec:
    kind: str
    dim: int | None = None
    tolerance: float = DEFAULT_TOLERANCE

    def __post_init__(self):
        if self.kind not in CONE_KINDS:
            raise ValueError(f"unknown cone kind {self.kind!r}")
        if self.tolerance < 0:
            raise ValueError("tolerance must be nonnegative")
        if self.kind == "ice_cream_2d" and self.dim not in (None, 2):
            raise ValueError("ice_cream_2d lives in R^2")

    @classmethod
    def componentwise(cls, n: int, tolerance=DEFAULT_TOLERANCE):
        return cls("componentwise", n, tolerance)

    @classmethod
    def ice_cream(cls, tolerance=DEFAULT_TOLERANCE):
        return cls("ice_cream_2d", 2, tolerance)

    @property
    def is_function_cone(self) -> bool:
        return self.kind in ("pointwise_function", "c1_pair")


@dataclass(frozen=True)
class NormSpec:
    kind: str
    p: float | None = None
    weights: tuple | None = None

    def __post_init__(self):
        if self.kind not in NORM_KINDS:
            raise ValueError(f"unknown norm kind {self.kind!r}")
        if self.kind in ("ellp", "lp_quadrature") and (self.p is None or self.p < 1):
            raise ValueError("p >= 1 required")
        if self.kind == "lp_quadrature" and self.weights is None:
            raise ValueError("lp_quadrature needs weights")


def _vector(v) -> tuple[np.ndarray, bool]:
    """Return (array, exact)."""
    if isinstance(v, np.ndarray):
        if v.dtype.kind in "iu":
            return v, True
        if v.dtype == object:
            return np.array([as_fraction(x) for x in v], dtype=object), True
        return v.astype(float), False
    items = list(v)
    if all(isinstance(x, (int, Fraction)) and not isinstance(x, bool) for x in items):
        return np.array([Fraction(x) for x in items], dtype=object), True
    return np.asarray(items, dtype=float), False


def _check_dim(cone: ConeSpec, arr: np.ndarray):
    if arr.ndim != 1:
        raise DimensionMismatch(f"expected a vector, got shape {arr.shape}")
    if cone.dim is not None and arr.shape[0] != cone.dim:
        raise DimensionMismatch(f"cone has dimension {cone.dim}, vector has {arr.shape[0]}")


def cone_member(cone: ConeSpec, v) -> bool:
    if cone.is_function_cone:
        if not isinstance(v, PiecewisePoly):
            raise DimensionMismatch(f"{cone.kind} cone expects a PiecewisePoly")
        if v.min_value()[1] < 0:
            return False
        if cone.kind == "c1_pair":
            return v.derivative().min_value()[1] >= 0
        return True
    if isinstance(v, PiecewisePoly):
        raise DimensionMismatch(f"{cone.kind} cone expects a vector")
    arr, exact = _vector(v)
    _check_dim(cone, arr)
    slack = 0 if exact else cone.tolerance
    if cone.kind == "componentwise":
        return bool(all(x >= -slack for x in arr))
    s, t = arr
    return bool(abs(s) <= t + slack)


def _sub(x, y):
    if isinstance(x, PiecewisePoly) or isinstance(y, PiecewisePoly):
        if not (isinstance(x, PiecewisePoly) and isinstance(y, PiecewisePoly)):
            raise DimensionMismatch("cannot mix functions and vectors")
        return x - y
    ax, ex = _vector(x)
    ay, ey = _vector(y)
    if ax.shape != ay.shape:
        raise DimensionMismatch(f"shapes {ax.shape} and {ay.shape} differ")
    if ex and ey:
        return ax - ay
    return ax.astype(float) - ay.astype(float)


def order_leq(x, y, cone: ConeSpec) -> bool:
    """x <= y iff y - x lies in the cone."""
    return cone_member(cone, _sub(y, x))


def norm_eval(x, normspec: NormSpec):
    kind = normspec.kind
    if isinstance(x, PiecewisePoly):
        if kind == "sup_abs":
            return x.sup_abs()
        if kind == "c1_sum":
            return x.sup_abs() + x.derivative().sup_abs()
        raise DimensionMismatch(f"norm {kind} is not defined for functions")
    if kind == "c1_sum":
        raise DimensionMismatch("c1_sum norm needs a PiecewisePoly")
    arr, exact = _vector(x)
    if arr.ndim != 1:
        raise DimensionMismatch(f"expected a vector, got shape {arr.shape}")
    if kind == "sup_abs":
        return max(abs(v) for v in arr) if exact else float(np.max(np.abs(arr)))
    if kind == "ell1":
        return sum(abs(v) for v in arr) if exact else float(np.sum(np.abs(arr)))
    p = normspec.p
    if kind == "ellp":
        if math.isinf(p):
            return norm_eval(x, NormSpec("sup_abs"))
        a = np.abs(arr.astype(float))
        return float(np.sum(a**p) ** (1.0 / p))
    w = np.asarray(normspec.weights, dtype=float)
    if w.shape != arr.shape:
        raise DimensionMismatch(f"{w.shape[0]} weights for a vector of length {arr.shape[0]}")
    return float(np.sum(w * np.abs(arr.astype(float)) ** p) ** (1.0 / p))


@dataclass(frozen=True)
class Space:
    """An ordered normed space: a cone for the order and a norm."""

    cone: ConeSpec
    norm: NormSpec

    def leq(self, x, y) -> bool:
        return order_leq(x, y, self.cone)

    def norm_of(self, x):
        return norm_eval(x, self.norm)

    def dist(self, x, y):
        return norm_eval(_sub(x, y), self.norm)


def _float_stack(sequence) -> np.ndarray | None:
    """Stack a sequence of float vectors, or None if any member is exact/function."""
    if not sequence or isinstance(sequence[0], PiecewisePoly):
        return None
    rows = []
    for v in sequence:
        arr, exact = _vector(v)
        if exact:
            return None
        rows.append(arr)
    try:
        return np.vstack(rows)
    except ValueError:
        raise DimensionMismatch("sequence members have different lengths") from None


def _stack_members(cone: ConeSpec, diffs: np.ndarray) -> np.ndarray:
    """Vectorised cone membership of each row of ``diffs`` (float path)."""
    if cone.dim is not None and diffs.shape[1] != cone.dim:
        raise DimensionMismatch(f"cone has dimension {cone.dim}, vectors have {diffs.shape[1]}")
    if cone.kind == "componentwise":
        return np.all(diffs >= -cone.tolerance, axis=1)
    return np.abs(diffs[:, 0]) <= diffs[:, 1] + cone.tolerance


def cauchy_defect(space: Space, sequence: Sequence, tail_start: int = 0):
    """Largest pairwise distance among ``sequence[tail_start:]``."""
    if len(sequence) <= tail_start + 1:
        raise ValueError("sequence too short for the requested tail")
    tail = list(sequence[tail_start:])
    stack = _float_stack(tail)
    if stack is not None and space.norm.kind == "sup_abs":
        return float(np.max(stack.max(axis=0) - stack.min(axis=0)))
    if stack is not None and space.norm.kind == "ell1" and stack.shape[1] <= 10:
        # |d|_1 = max over sign vectors of <sign, d>
        best = 0.0
        for signs in itertools.product((-1.0, 1.0), repeat=stack.shape[1]):
            proj = stack @ np.array(signs)
            best = max(best, float(proj.max() - proj.min()))
        return best
    best = 0
    for i in range(len(tail)):
        for j in range(i + 1, len(tail)):
            d = space.dist(tail[i], tail[j])
            if d > best:
                best = d
    return best


def _check_increasing(space: Space, sequence: Sequence) -> None:
    stack = _float_stack(sequence)
    if stack is not None and not space.cone.is_function_cone:
        ok = _stack_members(space.cone, np.diff(stack, axis=0))
        if not ok.all():
            raise NotIncreasing(int(np.argmin(ok)))
        return
    for i in range(len(sequence) - 1):
        if not space.leq(sequence[i], sequence[i + 1]):
            raise NotIncreasing(i)


def regularity_probe(
    space: Space,
    sequence: Sequence,
    bound,
    mode: str = "regular",
    tail_start: int | None = None,
    tol: float = 1e-6,
) -> ClaimReport:
    """Check an increasing bounded sequence and report its tail Cauchy defect.

    ``mode="regular"`` takes ``bound`` as an order upper bound (an element);
    ``mode="fully_regular"`` takes it as a bound on the norm.  A small defect
    is consistent with convergence; a defect bounded away from zero refutes
    convergence of this particular sequence.
    """
    if len(sequence) < 3:
        raise ValueError("need at least 3 sequence elements")
    if mode not in ("regular", "fully_regular"):
        raise ValueError(f"unknown mode {mode!r}")
    _check_increasing(space, sequence)

    stack = _float_stack(sequence)
    if mode == "regular":
        if stack is not None and not space.cone.is_function_cone:
            b, _ = _vector(bound)
            ok = _stack_members(space.cone, b.astype(float)[None, :] - stack)
            if not ok.all():
                raise BoundViolated(int(np.argmin(ok)))
        else:
            for i, x in enumerate(sequence):
                if not space.leq(x, bound):
                    raise BoundViolated(i)
        bound_desc = "x_n <= bound for all n"
    else:
        slack = 0 if stack is None else space.cone.tolerance
        if stack is not None and space.norm.kind in ("sup_abs", "ell1"):
            a = np.abs(stack)
            norms = a.max(axis=1) if space.norm.kind == "sup_abs" else a.sum(axis=1)
            over = np.flatnonzero(norms > bound + slack)
            if over.size:
                raise BoundViolated(int(over[0]))
        else:
            for i, x in enumerate(sequence):
                if space.norm_of(x) > bound + slack:
                    raise BoundViolated(i)
        bound_desc = f"||x_n|| <= {bound} for all n"

    if tail_start is None:
        tail_start = len(sequence) // 2
    defect = cauchy_defect(space, sequence, tail_start)
    report = ClaimReport()
    report.add("increasing", "x_n <= x_{n+1} for all n", len(sequence), True)
    report.add("bounded", bound_desc, mode, True)
    report.add(
        "tail_cauchy_defect",
        f"max pairwise distance over tail from index {tail_start} <= {tol}",
        defect,
        defect <= tol,
    )
    return report


def sup_of_increasing_sequence(
    space: Space,
    sequence: Sequence,
    candidate_upper_bounds: Sequence = (),
    tol: float = 1e-9,
    tail_start: int | None = None,
):
    """Numerical limit of a norm-convergent increasing sequence and its sup claims.

    The last element stands in for the limit once the tail defect is below
    ``tol``.  Returns ``(limit, ClaimReport)``.
    """
    if len(sequence) < 2:
        raise ValueError("need at least 2 sequence elements")
    _check_increasing(space, sequence)
    if tail_start is None:
        tail_start = len(sequence) // 2
    defect = cauchy_defect(space, sequence, tail_start)
    if defect > tol:
        raise NotConvergent(defect)
    limit = sequence[-1]

    report = ClaimReport()
    report.add("tail_cauchy_defect", f"<= {tol}", defect, True)
    report.add(
        "limit_dominates_members",
        "x_n <= limit for all n",
        len(sequence),
        all(space.leq(x, limit) for x in sequence),
    )
    skipped = []
    for k, cand in enumerate(candidate_upper_bounds):
        if not all(space.leq(x, cand) for x in sequence):
            skipped.append(k)
            continue
        report.add(
            f"limit_below_candidate_{k}",
            "limit <= every upper bound of the sequence",
            k,
            space.leq(limit, cand),
        )
    if skipped:
        report.add("candidates_not_bounding", "ignored: not upper bounds", skipped, True)
    return limit, report


# ---------------------------------------------------------------- samplers

Sampler = Callable[[np.random.Generator], tuple]


def cone_pair_sampler(cone: ConeSpec, scale: float = 1.0, equal_fraction: float = 0.0) -> Sampler:
    """Sampler of pairs 0 <= x <= y in a vector cone (floats).

    With probability ``equal_fraction`` the pair has x == y.
    """

    def draw_cone_point(rng):
        if cone.kind == "componentwise":
            return rng.random(cone.dim) * scale
        if cone.kind == "ice_cream_2d":
            t = rng.random() * scale
            return np.array([rng.uniform(-t, t), t])
        raise ValueError(f"no sampler for cone {cone.kind!r}")

    def sample(rng):
        x = draw_cone_point(rng)
        if rng.random() < equal_fraction:
            return x, x.copy()
        return x, x + draw_cone_point(rng)

    return sample


def fixed_pairs_sampler(pairs: Sequence[tuple], fallback: Sampler | None = None) -> Sampler:
    """Replay the given pairs first, then defer to ``fallback``."""
    queue = list(pairs)

    def sample(rng):
        if queue:
            return queue.pop(0)
        if fallback is None:
            raise EmptySample("fixed sampler exhausted")
        return fallback(rng)

    return sample


def normality_constant(
    cone: ConeSpec,
    normspec: NormSpec,
    sampler: Sampler,
    trials: int,
    seed: int = 0,
):
    """Lower-bound estimate of the normal constant: max ||x|| / ||y|| over samples.

    Every pair must satisfy 0 <= x <= y with y != 0.  The result certifies
    that no normal constant below it exists; it never certifies an upper
    bound.
    """
    if trials < 1:
        raise EmptySample("at least one trial is required")
    rng = np.random.default_rng(seed)
    best = None
    for k in range(trials):
        x, y = sampler(rng)
        zero = _sub(x, x)
        if not (order_leq(zero, x, cone) and order_leq(x, y, cone)):
            raise InvalidSample(f"trial {k}: pair violates 0 <= x <= y")
        ny = norm_eval(y, normspec)
        if ny == 0:
            raise InvalidSample(f"trial {k}: y is zero")
        ratio = norm_eval(x, normspec) / ny
        if best is None or ratio > best:
            best = ratio
    return best


def increasing_ice_cream_sequence(
    rng: np.random.Generator, length: int, bound: float, rate: float = 0.98
) -> np.ndarray:
    """Random increasing sequence in (R^2, ice-cream order) with ell1 norm <= bound.

    Starts at the origin; step k moves up by a geometrically decaying amount
    ``dt_k`` and sideways by at most ``dt_k``, so each step lies in the cone.
    The total climb is at most bound/2, which keeps |s| + t <= bound.
    """
    raw = rng.random(length - 1) * rate ** np.arange(length - 1)
    dt = raw * (bound / 2) / raw.sum() * rng.uniform(0.5, 1.0)
    ds = rng.uniform(-1.0, 1.0, length - 1) * dt
    out = np.zeros((length, 2))
    out[1:, 0] = np.cumsum(ds)
    out[1:, 1] = np.cumsum(dt)
    return out
