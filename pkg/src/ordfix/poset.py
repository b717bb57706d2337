"""Finite posets, set-valued maps and fixed-point checks.

Orders are stored as a boolean matrix ``leq[i, j]`` meaning
``elements[i] <= elements[j]``.  Element identifiers are any hashable values;
grid posets use tuples of Fractions so comparisons are exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Iterator, Mapping

import numpy as np

DEFAULT_CHAIN_BUDGET = 10**6


class PosetError(ValueError):
    pass


class AntisymmetryViolation(PosetError):
    def __init__(self, a, b):
        super().__init__(f"{a!r} <= {b!r} and {b!r} <= {a!r} but they differ")
        self.pair = (a, b)


class UnknownElement(PosetError):
    def __init__(self, element):
        super().__init__(f"unknown element {element!r}")
        self.element = element


class NotALattice(PosetError):
    def __init__(self, a, b, missing: str):
        super().__init__(f"{a!r} and {b!r} have no {missing}")
        self.pair = (a, b)
        self.missing = missing


class BudgetExceeded(RuntimeError):
    def __init__(self, budget: int):
        super().__init__(f"chain enumeration exceeded budget of {budget} chains")
        self.budget = budget


class HypothesisFailed(Exception):
    def __init__(self, name: str, witness, report=None):
        super().__init__(f"hypothesis {name} failed: {witness!r}")
        self.name = name
        self.witness = witness
        self.report = report


class FinitePoset:
    def __init__(self, elements: Iterable[Hashable], leq: np.ndarray, _trusted: bool = False):
        self.elements = tuple(elements)
        self.index = {e: i for i, e in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise PosetError("element identifiers must be unique")
        if not self.elements:
            raise PosetError("a poset needs at least one element")
        self.matrix = np.asarray(leq, dtype=bool)
        n = len(self.elements)
        if self.matrix.shape != (n, n):
            raise PosetError(f"relation matrix has shape {self.matrix.shape}, expected {(n, n)}")
        if not _trusted:
            self._check_axioms()
        self.matrix.setflags(write=False)

    @classmethod
    def from_relation(cls, elements: Iterable[Hashable], leq: Callable[[Hashable, Hashable], bool]):
        elements = tuple(elements)
        mat = np.array([[bool(leq(a, b)) for b in elements] for a in elements], dtype=bool)
        return cls(elements, mat.reshape(len(elements), len(elements)))

    def _check_axioms(self):
        m = self.matrix
        if not np.all(np.diag(m)):
            i = int(np.argmin(np.diag(m)))
            raise PosetError(f"relation is not reflexive at {self.elements[i]!r}")
        both = m & m.T & ~np.eye(len(m), dtype=bool)
        if both.any():
            i, j = map(int, np.argwhere(both)[0])
            raise AntisymmetryViolation(self.elements[i], self.elements[j])
        mi = m.astype(np.int64)
        if np.any((mi @ mi > 0) & ~m):
            raise PosetError("relation is not transitive")

    def __len__(self):
        return len(self.elements)

    def __contains__(self, e):
        return e in self.index

    def __repr__(self):
        return f"FinitePoset({len(self)} elements)"

    def _idx(self, e) -> int:
        try:
            return self.index[e]
        except (KeyError, TypeError):
            raise UnknownElement(e) from None

    def _mask(self, subset) -> np.ndarray:
        mask = np.zeros(len(self), dtype=bool)
        for e in subset:
            mask[self._idx(e)] = True
        return mask

    def _elems(self, mask: np.ndarray) -> frozenset:
        return frozenset(self.elements[i] for i in np.flatnonzero(mask))

    def ordered(self, subset: Iterable) -> list:
        """Subset elements in the poset's declared element order."""
        return sorted(subset, key=self._idx)

    # order queries ---------------------------------------------------------
    def leq(self, a, b) -> bool:
        return bool(self.matrix[self._idx(a), self._idx(b)])

    def lt(self, a, b) -> bool:
        return a != b and self.leq(a, b)

    def comparable(self, a, b) -> bool:
        return self.leq(a, b) or self.leq(b, a)

    def up(self, u) -> frozenset:
        """The ray [u) = {x : x >= u}."""
        return self._elems(self.matrix[self._idx(u)])

    def down(self, w) -> frozenset:
        """The ray (w] = {x : x <= w}."""
        return self._elems(self.matrix[:, self._idx(w)])

    def interval(self, u, w) -> frozenset:
        return self.up(u) & self.down(w)

    def upper_bounds(self, subset) -> frozenset:
        rows = self.matrix[[self._idx(e) for e in subset]]
        return self._elems(rows.all(axis=0)) if len(rows) else frozenset(self.elements)

    def lower_bounds(self, subset) -> frozenset:
        cols = self.matrix[:, [self._idx(e) for e in subset]]
        return self._elems(cols.all(axis=1)) if cols.shape[1] else frozenset(self.elements)

    def maximal(self, subset) -> frozenset:
        mask = self._mask(subset)
        strictly_above = self.matrix & ~np.eye(len(self), dtype=bool)
        has_bigger = (strictly_above[:, mask]).any(axis=1)
        return self._elems(mask & ~has_bigger)

    def minimal(self, subset) -> frozenset:
        mask = self._mask(subset)
        strictly_below = self.matrix.T & ~np.eye(len(self), dtype=bool)
        has_smaller = (strictly_below[:, mask]).any(axis=1)
        return self._elems(mask & ~has_smaller)

    def join(self, a, b):
        return extremum(self, (a, b), "sup")

    def meet(self, a, b):
        return extremum(self, (a, b), "inf")

    def cover_pairs(self) -> list[tuple]:
        """Hasse-diagram edges (a, b) with a < b and nothing strictly between."""
        strict = self.matrix & ~np.eye(len(self), dtype=bool)
        si = strict.astype(np.int64)
        covers = strict & ~((si @ si) > 0)
        return [(self.elements[i], self.elements[j]) for i, j in np.argwhere(covers)]

    def restrict(self, subset) -> "FinitePoset":
        idx = sorted(self._idx(e) for e in subset)
        return FinitePoset([self.elements[i] for i in idx], self.matrix[np.ix_(idx, idx)], _trusted=True)


def validate_poset(elements: Iterable[Hashable], leq_pairs: Iterable[tuple]) -> FinitePoset:
    """Reflexive-transitive closure of ``leq_pairs``, rejected unless antisymmetric."""
    elements = tuple(elements)
    if not elements:
        raise PosetError("elements must be nonempty")
    index = {}
    for i, e in enumerate(elements):
        if e in index:
            raise PosetError(f"duplicate element {e!r}")
        index[e] = i
    n = len(elements)
    m = np.eye(n, dtype=bool)
    for a, b in leq_pairs:
        if a not in index:
            raise UnknownElement(a)
        if b not in index:
            raise UnknownElement(b)
        m[index[a], index[b]] = True
    for k in range(n):  # Warshall closure
        m |= m[:, k : k + 1] & m[k : k + 1, :]
    both = m & m.T & ~np.eye(n, dtype=bool)
    if both.any():
        i, j = map(int, np.argwhere(both)[0])
        raise AntisymmetryViolation(elements[i], elements[j])
    return FinitePoset(elements, m, _trusted=True)


def extremum(poset: FinitePoset, subset: Iterable, mode: str = "sup"):
    """Least upper bound (mode="sup") or greatest lower bound ("inf"), or None."""
    subset = list(subset)
    if not subset:
        raise ValueError("subset must be nonempty")
    if mode not in ("sup", "inf"):
        raise ValueError(f"mode must be 'sup' or 'inf', got {mode!r}")
    m = poset.matrix if mode == "sup" else poset.matrix.T
    bounds = m[[poset._idx(e) for e in subset]].all(axis=0)
    cand = np.flatnonzero(bounds)
    # the least bound is the one lying below every other bound
    for i in cand:
        if m[i, bounds].all():
            return poset.elements[i]
    return None


def is_chain(poset: FinitePoset, subset: Iterable) -> bool:
    idx = [poset._idx(e) for e in subset]
    sub = poset.matrix[np.ix_(idx, idx)]
    return bool(np.all(sub | sub.T))


def iter_chains(poset: FinitePoset, subset: Iterable, budget: int = DEFAULT_CHAIN_BUDGET) -> Iterator[tuple]:
    """All nonempty chains inside ``subset``, listed bottom-up.

    Raises BudgetExceeded once more than ``budget`` chains were produced.
    """
    idx = sorted({poset._idx(e) for e in subset}, key=lambda i: (poset.matrix[:, i].sum(), i))
    strict = poset.matrix & ~np.eye(len(poset), dtype=bool)
    count = 0
    stack = [((i,), pos) for pos, i in enumerate(idx)]
    stack.reverse()
    while stack:
        chain, pos = stack.pop()
        count += 1
        if count > budget:
            raise BudgetExceeded(budget)
        yield tuple(poset.elements[i] for i in chain)
        top = chain[-1]
        nxt = [(chain + (j,), p) for p, j in enumerate(idx) if p > pos and strict[top, j]]
        stack.extend(reversed(nxt))


def is_chain_complete(poset: FinitePoset, subset: Iterable, exhaustive: bool = False,
                      budget: int = DEFAULT_CHAIN_BUDGET):
    """Every nonempty chain in ``subset`` has its least upper bound in ``subset``.

    Returns ``(flag, witness_chain_or_None)``.  Without ``exhaustive`` the
    check uses that a finite chain's sup is its top element, so only chains
    grouped by top element need a look.
    """
    subset = frozenset(subset)
    if not subset:
        raise ValueError("subset must be nonempty")
    if exhaustive:
        for chain in iter_chains(poset, subset, budget):
            lub = extremum(poset, chain, "sup")
            if lub is None or lub not in subset:
                return False, chain
        return True, None
    for top in poset.ordered(subset):
        lub = extremum(poset, (top,), "sup")
        if lub != top or lub not in subset:
            return False, (top,)
    return True, None


def is_inductive(poset: FinitePoset, subset: Iterable, exhaustive: bool = False,
                 budget: int = DEFAULT_CHAIN_BUDGET):
    """Every nonempty chain in ``subset`` has an upper bound in ``subset``."""
    subset = frozenset(subset)
    if not subset:
        raise ValueError("subset must be nonempty")
    if exhaustive:
        for chain in iter_chains(poset, subset, budget):
            if not (poset.upper_bounds(chain) & subset):
                return False, chain
        return True, None
    for top in poset.ordered(subset):
        if not (poset.up(top) & subset):
            return False, (top,)
    return True, None


def is_universally_inductive(poset: FinitePoset, A: Iterable, exhaustive: bool = False,
                             budget: int = DEFAULT_CHAIN_BUDGET):
    """Every chain of the poset whose members are each bounded above in A
    has a single upper bound in A.

    Such chains live in the down-set of A; in a finite poset the chain's top
    element decides whether a common bound exists.
    """
    A = frozenset(A)
    if not A:
        raise ValueError("A must be nonempty")
    below = frozenset().union(*(poset.down(a) for a in A))
    if exhaustive:
        for chain in iter_chains(poset, below, budget):
            if not (poset.upper_bounds(chain) & A):
                return False, chain
        return True, None
    for top in poset.ordered(below):
        if not (poset.up(top) & A):
            return False, (top,)
    return True, None


class SetValuedMap:
    """T: D -> nonempty subsets of the host poset."""

    def __init__(self, poset: FinitePoset, images: Mapping):
        self.poset = poset
        clean = {}
        for x, img in images.items():
            if x not in poset:
                raise UnknownElement(x)
            img = frozenset(img)
            if not img:
                raise PosetError(f"image of {x!r} is empty")
            for z in img:
                if z not in poset:
                    raise UnknownElement(z)
            clean[x] = img
        if not clean:
            raise PosetError("map has an empty domain")
        self.images = clean

    @classmethod
    def single_valued(cls, poset: FinitePoset, f: Callable | Mapping, domain: Iterable | None = None):
        domain = poset.elements if domain is None else domain
        get = f.__getitem__ if isinstance(f, Mapping) else f
        return cls(poset, {x: (get(x),) for x in domain})

    @property
    def domain(self) -> frozenset:
        return frozenset(self.images)

    def __call__(self, x) -> frozenset:
        return self.images[x]

    def is_single_valued(self) -> bool:
        return all(len(v) == 1 for v in self.images.values())


def check_isotone(poset: FinitePoset, T: SetValuedMap, mode: str = "upward"):
    """Isotone test on T's domain; returns (flag, witness (x, y, z) or None)."""
    if mode not in ("upward", "downward", "both"):
        raise ValueError(f"unknown mode {mode!r}")
    dom = poset.ordered(T.domain)
    for x in dom:
        for y in dom:
            if not poset.leq(x, y):
                continue
            if mode in ("upward", "both"):
                for z in poset.ordered(T(x)):
                    if not any(poset.leq(z, w) for w in T(y)):
                        return False, (x, y, z)
            if mode in ("downward", "both"):
                for w in poset.ordered(T(y)):
                    if not any(poset.leq(z, w) for z in T(x)):
                        return False, (x, y, w)
    return True, None


def fixed_point_set(T: SetValuedMap) -> frozenset:
    return frozenset(x for x, img in T.images.items() if x in img)


def iterate_to_fixed_point(poset: FinitePoset, F: Callable, start, max_steps: int | None = None):
    """Iterate a single-valued map from ``start`` until it stops moving.

    Returns ``(fixed_point, steps)``.
    """
    max_steps = len(poset) + 1 if max_steps is None else max_steps
    x = start
    for step in range(max_steps + 1):
        nxt = F(x)
        if nxt == x:
            return x, step
        x = nxt
    raise RuntimeError(f"no fixed point reached in {max_steps} steps")


@dataclass
class FixedPointReport:
    fixed_points: frozenset
    is_inductive: bool
    above_seed: frozenset
    maximal_elements: frozenset
    hypothesis_log: list = field(default_factory=list)
    conclusion_log: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "fixed_points": self.fixed_points,
            "is_inductive": self.is_inductive,
            "above_seed": self.above_seed,
            "maximal_elements": self.maximal_elements,
            "hypothesis_log": [
                {"hypothesis": n, "pass": ok, "witness": w} for n, ok, w in self.hypothesis_log
            ],
            "conclusion_log": [
                {"conclusion": n, "pass": ok, "witness": w} for n, ok, w in self.conclusion_log
            ],
        }


def verify_fixed_point_theorem(poset: FinitePoset, D: Iterable, T: SetValuedMap, x0,
                               budget: int = DEFAULT_CHAIN_BUDGET) -> FixedPointReport:
    """Check the hypotheses of the set-valued isotone fixed-point theorem on a
    finite instance, then check its conclusions by enumeration.

    Hypotheses: D inductive and chain-complete, T maps D into nonempty subsets
    of D, A1 (T isotone upward), A2 (each T(x) universally inductive in D),
    A3 (some x1 in T(x0) with x0 <= x1).  Raises HypothesisFailed on the
    first failure.
    """
    D = frozenset(D)
    if x0 not in D:
        raise PosetError(f"seed {x0!r} is not in D")
    if T.domain != D:
        raise PosetError("T must be defined exactly on D")
    sub = poset.restrict(D)
    log: list = []
    report = FixedPointReport(frozenset(), False, frozenset(), frozenset(), log)

    def record(name, result):
        ok, witness = result
        log.append((name, bool(ok), witness))
        if not ok:
            raise HypothesisFailed(name, witness, report)

    record("D_inductive", is_inductive(sub, D, budget=budget))
    record("D_chain_complete", is_chain_complete(sub, D, budget=budget))
    outside = [(x, z) for x in sub.ordered(D) for z in poset.ordered(T(x) - D)]
    record("T_maps_into_D", (not outside, outside[0] if outside else None))
    record("A1", check_isotone(sub, T, "upward"))
    a2 = (True, None)
    for x in sub.ordered(D):
        ok, w = is_universally_inductive(sub, T(x), budget=budget)
        if not ok:
            a2 = (False, (x, w))
            break
    record("A2", a2)
    lifts = [z for z in sub.ordered(T(x0)) if sub.leq(x0, z)]
    record("A3", (bool(lifts), (x0, lifts[0]) if lifts else (x0, None)))

    fixed = fixed_point_set(T)
    above = frozenset(x for x in fixed if sub.leq(x0, x))
    report.fixed_points = fixed
    report.above_seed = above
    concl = report.conclusion_log
    concl.append(("fixed_set_nonempty", bool(fixed), len(fixed)))
    ind_ok, ind_w = is_inductive(sub, fixed, budget=budget) if fixed else (False, None)
    report.is_inductive = ind_ok
    concl.append(("fixed_set_inductive", ind_ok, ind_w))
    concl.append(("above_seed_nonempty", bool(above), len(above)))
    above_ok = is_inductive(sub, above, budget=budget)[0] if above else False
    concl.append(("above_seed_inductive", above_ok, None))
    report.maximal_elements = sub.maximal(above) if above else frozenset()
    concl.append(("maximal_fixed_point_above_seed", bool(report.maximal_elements),
                  report.maximal_elements))
    return report


def is_sublattice(lattice: FinitePoset, S: Iterable, candidates: Iterable[tuple] = ()):
    """Whether S is closed under the host's binary joins and meets.

    Returns ``(flag, witness)`` where witness is ``(a, b, join, meet)`` for the
    first violating pair; pairs in ``candidates`` are tried first.  Raises
    NotALattice if some pair of host elements lacks a join or a meet.
    """
    els = lattice.elements
    for i, a in enumerate(els):
        for b in els[i + 1 :]:
            if extremum(lattice, (a, b), "sup") is None:
                raise NotALattice(a, b, "join")
            if extremum(lattice, (a, b), "inf") is None:
                raise NotALattice(a, b, "meet")
    S = frozenset(S)
    ordered = lattice.ordered(S)
    pairs = [tuple(p) for p in candidates if p[0] in S and p[1] in S]
    pairs += [(a, b) for i, a in enumerate(ordered) for b in ordered[i + 1 :]]
    for a, b in pairs:
        j = extremum(lattice, (a, b), "sup")
        m = extremum(lattice, (a, b), "inf")
        if j not in S or m not in S:
            return False, (a, b, j, m)
    return True, None


def sublattice_violations(lattice: FinitePoset, S: Iterable) -> list[tuple]:
    """Every pair of S whose join or meet leaves S, as (a, b, join, meet)."""
    S = frozenset(S)
    ordered = lattice.ordered(S)
    out = []
    for i, a in enumerate(ordered):
        for b in ordered[i + 1 :]:
            j = extremum(lattice, (a, b), "sup")
            m = extremum(lattice, (a, b), "inf")
            if j not in S or m not in S:
                out.append((a, b, j, m))
    return out
