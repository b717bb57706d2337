"""Exact piecewise polynomials of degree <= 2 over rational breakpoints.

Coefficients are in the global variable ``t`` (not shifted per segment), so a
segment ``(lo, hi, (c0, c1, c2))`` stands for ``c0 + c1*t + c2*t**2`` on
``[lo, hi]``.  Everything is :class:`fractions.Fraction`; extrema, norms and
order comparisons are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Number = Fraction | int


def as_fraction(value) -> Fraction:
    """Convert ints, Fractions, ``"p/q"`` strings and floats to a Fraction.

    Floats go through ``str`` so that ``0.9`` becomes ``9/10`` rather than the
    binary expansion of the nearest double.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite value {value!r}")
        return Fraction(repr(value))
    return Fraction(value)


def format_fraction(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Segment:
    lo: Fraction
    hi: Fraction
    coeffs: tuple[Fraction, Fraction, Fraction]

    def __call__(self, t: Number) -> Fraction:
        c0, c1, c2 = self.coeffs
        return c0 + t * (c1 + t * c2)

    def derivative(self) -> "Segment":
        _, c1, c2 = self.coeffs
        return Segment(self.lo, self.hi, (c1, 2 * c2, Fraction(0)))

    def extremes(self) -> list[tuple[Fraction, Fraction]]:
        """(t, value) at the endpoints and at an interior vertex if any."""
        pts = [self.lo, self.hi]
        c2 = self.coeffs[2]
        if c2 != 0:
            vertex = -self.coeffs[1] / (2 * c2)
            if self.lo < vertex < self.hi:
                pts.append(vertex)
        return [(t, self(t)) for t in pts]

    def roots(self) -> list[Fraction]:
        """Rational roots strictly inside (lo, hi).

        Raises ValueError when a root exists there but is irrational.
        """
        c0, c1, c2 = self.coeffs
        found: list[Fraction] = []
        if c2 == 0:
            if c1 != 0:
                found.append(-c0 / c1)
        else:
            disc = c1 * c1 - 4 * c2 * c0
            if disc < 0:
                return []
            root = _rational_sqrt(disc)
            if root is None:
                # an irrational crossing only matters if it lands inside
                approx = math.sqrt(float(disc))
                for sgn in (-1, 1):
                    r = (-float(c1) + sgn * approx) / (2 * float(c2))
                    if float(self.lo) < r < float(self.hi):
                        raise ValueError("irrational crossing point inside segment")
                return []
            found = [(-c1 - root) / (2 * c2), (-c1 + root) / (2 * c2)]
        return sorted({r for r in found if self.lo < r < self.hi})


def _rational_sqrt(x: Fraction) -> Fraction | None:
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


class PiecewisePoly:
    """A function on ``[a, b]`` given by polynomial pieces of degree <= 2."""

    def __init__(self, segments: Iterable[tuple]):
        segs = []
        for seg in segments:
            if isinstance(seg, Segment):
                segs.append(seg)
                continue
            lo, hi, coeffs = seg
            coeffs = [as_fraction(c) for c in coeffs]
            if len(coeffs) > 3:
                if any(c != 0 for c in coeffs[3:]):
                    raise ValueError("degree above 2 is not supported")
                coeffs = coeffs[:3]
            coeffs += [Fraction(0)] * (3 - len(coeffs))
            segs.append(Segment(as_fraction(lo), as_fraction(hi), tuple(coeffs)))
        if not segs:
            raise ValueError("at least one segment is required")
        for s in segs:
            if not s.lo < s.hi:
                raise ValueError(f"breakpoints must strictly increase: {s.lo} >= {s.hi}")
        for left, right in zip(segs, segs[1:]):
            if left.hi != right.lo:
                raise ValueError(f"segments do not tile: gap/overlap at {left.hi}, {right.lo}")
        self.segments: tuple[Segment, ...] = tuple(segs)

    # construction helpers -------------------------------------------------
    @classmethod
    def constant(cls, c, a=0, b=1) -> "PiecewisePoly":
        return cls([(a, b, (c,))])

    @property
    def interval(self) -> tuple[Fraction, Fraction]:
        return self.segments[0].lo, self.segments[-1].hi

    @property
    def breakpoints(self) -> list[Fraction]:
        return [s.lo for s in self.segments] + [self.segments[-1].hi]

    def __repr__(self):
        parts = ", ".join(
            f"[{format_fraction(s.lo)},{format_fraction(s.hi)}]:"
            f"({', '.join(format_fraction(c) for c in s.coeffs)})"
            for s in self.segments
        )
        return f"PiecewisePoly({parts})"

    def __eq__(self, other):
        if not isinstance(other, PiecewisePoly):
            return NotImplemented
        if self.interval != other.interval:
            return False
        a, b = self.refine(other.breakpoints), other.refine(self.breakpoints)
        return all(x.coeffs == y.coeffs for x, y in zip(a.segments, b.segments))

    def __hash__(self):
        return hash(self.simplify().segments)

    # evaluation -----------------------------------------------------------
    def segment_at(self, t: Number) -> Segment:
        t = as_fraction(t)
        a, b = self.interval
        if not a <= t <= b:
            raise ValueError(f"t={t} outside [{a}, {b}]")
        for seg in self.segments:
            if t < seg.hi:
                return seg
        return self.segments[-1]

    def __call__(self, t: Number) -> Fraction:
        # right-continuous at breakpoints; immaterial for continuous functions
        return self.segment_at(t)(as_fraction(t))

    def left_limit(self, t: Number) -> Fraction:
        t = as_fraction(t)
        for seg in self.segments:
            if seg.lo < t <= seg.hi:
                return seg(t)
        return self(t)

    def derivative(self) -> "PiecewisePoly":
        return PiecewisePoly([s.derivative() for s in self.segments])

    def is_continuous(self) -> bool:
        return all(l(l.hi) == r(r.lo) for l, r in zip(self.segments, self.segments[1:]))

    def is_c1(self) -> bool:
        return self.is_continuous() and self.derivative().is_continuous()

    # algebra --------------------------------------------------------------
    def refine(self, points: Iterable[Number]) -> "PiecewisePoly":
        a, b = self.interval
        cuts = sorted({as_fraction(p) for p in points if a < as_fraction(p) < b})
        out = []
        for seg in self.segments:
            lo = seg.lo
            for c in cuts:
                if seg.lo < c < seg.hi:
                    out.append(Segment(lo, c, seg.coeffs))
                    lo = c
            out.append(Segment(lo, seg.hi, seg.coeffs))
        return PiecewisePoly(out)

    def _combine(self, other: "PiecewisePoly", op) -> "PiecewisePoly":
        if self.interval != other.interval:
            raise ValueError(f"interval mismatch: {self.interval} vs {other.interval}")
        a = self.refine(other.breakpoints)
        b = other.refine(self.breakpoints)
        return PiecewisePoly(
            Segment(x.lo, x.hi, tuple(op(p, q) for p, q in zip(x.coeffs, y.coeffs)))
            for x, y in zip(a.segments, b.segments)
        )

    def __add__(self, other):
        return self._combine(other, lambda p, q: p + q)

    def __sub__(self, other):
        return self._combine(other, lambda p, q: p - q)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, alpha) -> "PiecewisePoly":
        alpha = as_fraction(alpha)
        return PiecewisePoly(
            Segment(s.lo, s.hi, tuple(alpha * c for c in s.coeffs)) for s in self.segments
        )

    def __mul__(self, alpha):
        return self.scale(alpha)

    __rmul__ = __mul__

    def simplify(self) -> "PiecewisePoly":
        """Merge neighbouring segments carrying the same polynomial."""
        out = [self.segments[0]]
        for seg in self.segments[1:]:
            if seg.coeffs == out[-1].coeffs:
                out[-1] = Segment(out[-1].lo, seg.hi, seg.coeffs)
            else:
                out.append(seg)
        return PiecewisePoly(out)

    def minimum(self, other: "PiecewisePoly") -> "PiecewisePoly":
        """Pointwise min; exact when every crossing point is rational."""
        diff = self - other
        cuts = [r for seg in diff.segments for r in seg.roots()]
        a = self.refine(cuts + other.breakpoints)
        b = other.refine(cuts + self.breakpoints)
        out = []
        for x, y in zip(a.segments, b.segments):
            mid = (x.lo + x.hi) / 2
            out.append(x if x(mid) <= y(mid) else y)
        return PiecewisePoly(out).simplify()

    # extrema --------------------------------------------------------------
    def _extremes(self) -> list[tuple[Fraction, Fraction]]:
        return [pt for seg in self.segments for pt in seg.extremes()]

    def min_value(self) -> tuple[Fraction, Fraction]:
        """(t, value) of the exact minimum over the closure of each piece."""
        return min(self._extremes(), key=lambda p: (p[1], p[0]))

    def max_value(self) -> tuple[Fraction, Fraction]:
        return max(self._extremes(), key=lambda p: (p[1], -p[0]))

    def sup_abs(self) -> Fraction:
        return max(abs(v) for _, v in self._extremes())

    def argmax_abs(self) -> Fraction:
        return max(self._extremes(), key=lambda p: (abs(p[1]), -p[0]))[0]

    # interchange ----------------------------------------------------------
    def to_json(self) -> dict:
        a, b = self.interval
        return {
            "interval": [format_fraction(a), format_fraction(b)],
            "segments": [
                {
                    "from": format_fraction(s.lo),
                    "to": format_fraction(s.hi),
                    "coeffs": [format_fraction(c) for c in s.coeffs],
                }
                for s in self.segments
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "PiecewisePoly":
        pp = cls((s["from"], s["to"], s["coeffs"]) for s in data["segments"])
        if "interval" in data:
            a, b = (as_fraction(v) for v in data["interval"])
            if pp.interval != (a, b):
                raise ValueError("segments do not tile the declared interval")
        return pp


def piecewise(pieces: Sequence[tuple]) -> PiecewisePoly:
    return PiecewisePoly(pieces)
