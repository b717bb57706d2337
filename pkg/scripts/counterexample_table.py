"""Print every claim of every counterexample fixture as a table.

    python3 scripts/counterexample_table.py [--n-max N] [fixture ...]
"""
import argparse
from fractions import Fraction

from ordfix import counterexamples as cx


def show(value):
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value)
        return f"{value} (~{float(value):.6g})" if len(str(value)) <= 24 else f"~{float(value):.12g} (exact)"
    if isinstance(value, float):
        return f"{value:.6g}"
    text = repr(value)
    return text if len(text) <= 60 else text[:57] + "..."


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("fixtures", nargs="*", default=list(cx.FIXTURES))
    ap.add_argument("--n-max", type=int, default=None)
    args = ap.parse_args()

    failed = 0
    for name in args.fixtures:
        rep = cx.verify_counterexample(name, args.n_max)
        n = args.n_max or cx.DEFAULT_N_MAX[name]
        print(f"\n{name}  (n_max={n})  {'PASS' if rep.passed else 'FAIL'}")
        for c in rep.claims:
            print(f"  {'ok ' if c.passed else 'BAD'}  {c.claim:<36} {show(c.measured)}")
        failed += not rep.passed
    raise SystemExit(1 if failed else 0)


if __name__ == "__main__":
    main()
