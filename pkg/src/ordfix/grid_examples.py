"""Grid discretisations of the planar fixed-point examples.

Each domain lives in (R^2, componentwise order) and is sampled on a uniform
dyadic grid; coordinates are Fractions so the cited witness points are exact
grid points.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

from ordfix.piecewise import as_fraction
from ordfix.poset import FinitePoset, SetValuedMap

EXAMPLES = ("remark_3_11", "example_3_12_1", "example_3_12_2")

DEFAULT_STEP = {
    "remark_3_11": Fraction(1, 4),
    "example_3_12_1": Fraction(1, 2),
    "example_3_12_2": Fraction(1, 4),
}

# pairs whose join and meet leave the fixed-point set
CITED_WITNESS = {
    "remark_3_11": ((1, 1), (Fraction(3, 2), Fraction(1, 2)), (Fraction(3, 2), 1), (1, Fraction(1, 2))),
    "example_3_12_1": ((1, 2), (2, 1), (2, 2), (1, 1)),
    "example_3_12_2": ((1, 2), (2, 1), (2, 2), (1, 1)),
}

_CITED_POINTS = ((1, 1), (Fraction(3, 2), Fraction(1, 2)), (1, 2), (2, 1))


class BadGridStep(ValueError):
    pass


class BuiltinExample(NamedTuple):
    poset: FinitePoset
    T: SetValuedMap
    expected_fixed: frozenset
    x0: tuple


def point(s, t) -> tuple[Fraction, Fraction]:
    return (Fraction(s), Fraction(t))


def componentwise_leq(a, b) -> bool:
    return a[0] <= b[0] and a[1] <= b[1]


def grid_poset(points) -> FinitePoset:
    pts = sorted(set(points))
    return FinitePoset.from_relation(pts, componentwise_leq)


def _check_step(step: Fraction, extent: int) -> int:
    if step <= 0:
        raise BadGridStep("grid step must be positive")
    for p in _CITED_POINTS:
        for c in p:
            if (Fraction(c) / step).denominator != 1:
                raise BadGridStep(f"cited coordinate {c} is not a multiple of step {step}")
    return int(extent / step)


def _square_diagonal(step):
    n = _check_step(step, 2)
    pts = [point(i * step, j * step) for i in range(n + 1) for j in range(n + 1)]
    poset = grid_poset(pts)
    images = {}
    for s, t in poset.elements:
        if s < 1:
            images[(s, t)] = {(s, s)}
        else:
            images[(s, t)] = {(s, s), (s, s - 1)}
    expected = frozenset(x for x in poset.elements if x[1] == x[0] or (x[0] >= 1 and x[1] == x[0] - 1))
    return poset, images, expected


def _two_segments(step):
    n = _check_step(step, 1)
    seg_a = [point(k * step, k * step) for k in range(n + 1)]
    seg_b = [point(2 + k * step, 2 + k * step) for k in range(n + 1)]
    extra = [point(1, 2), point(2, 1)]
    poset = grid_poset(seg_a + seg_b + extra)
    images = {}
    for x in poset.elements:
        if x in extra:
            images[x] = {x}
        elif x[0] <= 1:
            images[x] = {point(0, 0)}
        else:
            images[x] = {point(3, 3)}
    expected = frozenset({point(0, 0), point(1, 2), point(2, 1), point(3, 3)})
    return poset, images, expected


def in_quadrilateral(s, t) -> bool:
    """Closed 4-gon with vertices (0,0), (1,2), (3,3), (2,1)."""
    return s / 2 <= t <= 2 * s and 2 * s - 3 <= t <= (s + 3) / 2


def _quadrilateral(step):
    n = _check_step(step, 3)
    pts = [point(i * step, j * step) for i in range(n + 1) for j in range(n + 1)]
    poset = grid_poset(p for p in pts if in_quadrilateral(*p))
    ends = (point(1, 2), point(2, 1))
    images = {}
    for x in poset.elements:
        s, t = x
        if x in ends:
            images[x] = {x}
        elif s + t < 3:  # triangle (0,0),(1,2),(2,1) minus the diagonal C
            images[x] = {point(0, 0)}
        else:  # the other triangle, plus the open diagonal C1
            images[x] = {point(3, 3)}
    expected = frozenset({point(0, 0), point(1, 2), point(2, 1), point(3, 3)})
    return poset, images, expected


_BUILDERS = {
    "remark_3_11": _square_diagonal,
    "example_3_12_1": _two_segments,
    "example_3_12_2": _quadrilateral,
}


def builtin_example(name: str, grid_step=None) -> BuiltinExample:
    if name not in _BUILDERS:
        raise ValueError(f"unknown example {name!r}; choose from {', '.join(EXAMPLES)}")
    step = DEFAULT_STEP[name] if grid_step is None else as_fraction(grid_step)
    poset, images, expected = _BUILDERS[name](step)
    T = SetValuedMap(poset, images)
    return BuiltinExample(poset, T, expected, point(0, 0))


def cited_witness(name: str) -> tuple:
    """(a, b, join, meet) for the named example, as exact Fraction points."""
    a, b, j, m = CITED_WITNESS[name]
    return tuple(point(*p) for p in (a, b, j, m))
