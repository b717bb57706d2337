"""Cross-check fixed-point machinery on random finite lattices.

Builds random join-closed families of subsets, random increasing maps on them,
and compares the iterated least fixed point with brute force.  Also checks that
the fixed-point set of each map is a complete lattice in its own order, and
counts how often it fails to be a sublattice of the host.

    python3 scripts/knaster_tarski_crosscheck.py [--trials 200] [--seed 0]
"""
import argparse
import itertools
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))
from oracles import increasing_map, least_fixed_point, random_join_lattice, subset_leq  # noqa: E402

from ordfix.poset import (  # noqa: E402
    FinitePoset,
    SetValuedMap,
    extremum,
    is_sublattice,
    iterate_to_fixed_point,
    verify_fixed_point_theorem,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    mismatches = not_sub = 0
    sizes, steps_seen = [], []
    for _ in range(args.trials):
        lat = random_join_lattice(rng, atoms=5, generators=6)
        p = FinitePoset.from_relation(lat, subset_leq)
        F = increasing_map(rng, lat)
        lfp, steps = iterate_to_fixed_point(p, F.__getitem__, 0)
        rep = verify_fixed_point_theorem(p, lat, SetValuedMap.single_valued(p, F), 0)
        fixed = rep.fixed_points
        sub = p.restrict(fixed)
        complete = all(extremum(sub, [a, b], "sup") is not None and extremum(sub, [a, b], "inf") is not None
                       for a, b in itertools.combinations(fixed, 2))
        ok = lfp == least_fixed_point(lat, F) and complete and lfp in fixed
        mismatches += not ok
        not_sub += not is_sublattice(p, fixed)[0]
        sizes.append(len(fixed))
        steps_seen.append(steps)

    print(f"trials                         {args.trials}")
    print(f"least fixed point mismatches   {mismatches}")
    print(f"fixed sets not a sublattice    {not_sub}")
    print(f"fixed-set size min/mean/max    {min(sizes)}/{np.mean(sizes):.2f}/{max(sizes)}")
    print(f"iteration steps max            {max(steps_seen)}")
    raise SystemExit(1 if mismatches else 0)


if __name__ == "__main__":
    main()
