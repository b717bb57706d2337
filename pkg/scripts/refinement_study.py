"""Trapezoid refinement study for the separable Hammerstein problem.

Halves the node spacing repeatedly and prints lambda, the solution norm and the
ratio of successive differences.  Second-order convergence shows up as ratios near 4.

    python3 scripts/refinement_study.py [--levels 6] [--rule trapezoid]
"""
import argparse

from ordfix import hammerstein as hs
from ordfix.cli import SOLVE_FIXTURES


def ratios(values):
    d = [a - b for a, b in zip(values, values[1:])]
    return [None, None] + [d[i] / d[i + 1] for i in range(len(d) - 1)]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--levels", type=int, default=6)
    ap.add_argument("--rule", choices=hs.RULES, default="trapezoid")
    args = ap.parse_args()

    base = SOLVE_FIXTURES["separable"][0]
    counts = [2**k + 1 for k in range(4, 4 + args.levels)]
    lams, norms, iters = [], [], []
    for n in counts:
        P = hs.HammersteinProblem.from_config(dict(base, nodes=n, rule=args.rule))
        rep = hs.monotone_solve(P)
        lams.append(hs.compute_lambda(P))
        norms.append(rep.norm_p)
        iters.append(rep.iterates_count)

    fmt = lambda r: "      -" if r is None else f"{r:7.4f}"
    print(f"{'nodes':>6} {'lambda':>20} {'ratio':>7} {'||x*||_2':>20} {'ratio':>7} {'iters':>5}")
    for row in zip(counts, lams, ratios(lams), norms, ratios(norms), iters):
        n, lam, rl, nm, rn, it = row
        print(f"{n:6d} {lam:20.15f} {fmt(rl)} {nm:20.15f} {fmt(rn)} {it:5d}")
    print(f"exact lambda = 7/3 = {7 / 3:.15f}")


if __name__ == "__main__":
    main()
