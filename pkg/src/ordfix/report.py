"""Claim reports and canonical JSON output."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, fields, is_dataclass
from fractions import Fraction
from typing import Any

import numpy as np

from ordfix.piecewise import PiecewisePoly, format_fraction


@dataclass
class Claim:
    claim: str
    expected: str
    measured: Any
    passed: bool

    def to_json(self) -> dict:
        return {
            "claim": self.claim,
            "expected": self.expected,
            "measured": to_jsonable(self.measured),
            "pass": bool(self.passed),
        }


@dataclass
class ClaimReport:
    claims: list[Claim] = field(default_factory=list)

    def add(self, claim: str, expected: str, measured, passed: bool) -> bool:
        self.claims.append(Claim(claim, expected, measured, bool(passed)))
        return bool(passed)

    def extend(self, other: "ClaimReport", prefix: str = "") -> None:
        for c in other.claims:
            self.claims.append(Claim(prefix + c.claim, c.expected, c.measured, c.passed))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.claims)

    def __getitem__(self, claim_id: str) -> Claim:
        for c in self.claims:
            if c.claim == claim_id:
                return c
        raise KeyError(claim_id)

    def __contains__(self, claim_id: str) -> bool:
        return any(c.claim == claim_id for c in self.claims)

    def failures(self) -> list[Claim]:
        return [c for c in self.claims if not c.passed]

    def to_json(self) -> list[dict]:
        return [c.to_json() for c in self.claims]


def to_jsonable(obj):
    """Recursively convert report payloads into plain JSON types.

    Fractions become ``"p/q"`` strings, numpy scalars and arrays become
    Python numbers and lists.  Non-finite floats raise ValueError.
    """
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, Fraction):
        return format_fraction(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        if not math.isfinite(value):
            raise ValueError(f"non-finite number in report: {value!r}")
        return value
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, PiecewisePoly):
        return obj.to_json()
    if hasattr(obj, "to_json"):
        return to_jsonable(obj.to_json())
    if is_dataclass(obj):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in fields(obj)}
    if isinstance(obj, dict):
        return {k if isinstance(k, str) else json.dumps(to_jsonable(k)): to_jsonable(v)
                for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        items = [to_jsonable(v) for v in obj]
        return sorted(items, key=lambda v: json.dumps(v, sort_keys=True))
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def canonical_json(payload) -> str:
    """Sorted keys, fixed separators, shortest round-trip floats, no NaN."""
    return json.dumps(
        to_jsonable(payload), sort_keys=True, indent=2, allow_nan=False, ensure_ascii=True
    ) + "\n"
