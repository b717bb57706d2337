"""Command-line front end.

    ordfix verify <fixture> [--n-max K] [--out PATH]
    ordfix poset <fixture> | --config PATH [--check thm3.9|sublattice] [--grid-step S] [--out PATH]
    ordfix solve --fixture NAME | --config PATH [--eps E] [--max-iter M] [--seeds PATH]
                 [--override] [--out PATH]

Exit codes: 0 every check passed, 1 a claim, hypothesis or convergence check
failed, 2 invalid input.  Reports are canonical JSON.  ORDFIX_SEED overrides
the sampler seed (default 0).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from ordfix import counterexamples, grid_examples, hammerstein
from ordfix.piecewise import as_fraction
from ordfix.poset import (
    BudgetExceeded,
    HypothesisFailed,
    NotALattice,
    PosetError,
    SetValuedMap,
    is_sublattice,
    validate_poset,
    verify_fixed_point_theorem,
)
from ordfix.report import canonical_json

EXIT_OK, EXIT_FALSIFIED, EXIT_INVALID = 0, 1, 2
CHECKS = ("thm3.9", "sublattice")

_SEPARABLE = {
    "domain": [0.0, 1.0], "nodes": 257, "rule": "gauss_legendre", "p": 2.0, "gamma": 1.0,
    "kernel": {"family": "separable",
               "g": {"family": "affine", "c0": 1.0, "c1": 1.0},
               "h": {"family": "constant", "value": 1.0}},
    "nonlinearity": {"family": "bounded_sigmoid", "a": 0.2, "b": 0.3},
}

# name -> (problem config, override flag, expected exit code)
SOLVE_FIXTURES = {
    "trivial": ({
        "domain": [0.0, 1.0], "nodes": 129, "rule": "trapezoid", "p": 2.0, "gamma": 1.0,
        "kernel": {"family": "constant", "value": 1.0},
        "nonlinearity": {"family": "constant", "a": 1.0},
    }, False, EXIT_OK),
    "separable": (_SEPARABLE, False, EXIT_OK),
    "negated": ({**_SEPARABLE, "nodes": 65,
                 "nonlinearity": {"family": "affine", "a": 0.0, "b": -1.0}}, True, EXIT_FALSIFIED),
    "reversed": ({**_SEPARABLE, "nodes": 65,
                  "nonlinearity": {"family": "affine", "a": 0.5, "b": -1.0}}, True, EXIT_FALSIFIED),
    "unaudited": ({**_SEPARABLE, "nodes": 65,
                   "nonlinearity": {"family": "affine", "a": 0.5, "b": -1.0}}, False, EXIT_FALSIFIED),
}


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    command: str
    fixture: str | None = None
    config_path: Path | None = None
    config: dict | None = None
    n_max: int | None = None
    eps: float = 1e-12
    max_iter: int = 1000
    grid_step: Fraction | None = None
    checks: tuple = CHECKS
    seeds_path: Path | None = None
    seeds: list | None = None
    override: bool = False
    out: Path | None = None
    seed: int = 0


@dataclass
class RunResult:
    exit_code: int
    payload: dict = field(default_factory=dict)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ordfix", description="Order-theoretic fixed-point checks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="check the claims attached to a counterexample chain")
    v.add_argument("fixture", help=f"one of {', '.join(counterexamples.FIXTURES)}")
    v.add_argument("--n-max", type=int, default=None, help="chain length (default per fixture)")
    v.add_argument("--out", type=Path, default=None, help="report path (default stdout)")

    p = sub.add_parser("poset", help="check a finite fixed-point instance")
    p.add_argument("fixture", nargs="?", help=f"one of {', '.join(grid_examples.EXAMPLES)}")
    p.add_argument("--config", type=Path, default=None, help="poset/map interchange JSON")
    p.add_argument("--check", choices=CHECKS, default=None, help="run one check (default both)")
    p.add_argument("--grid-step", default=None, help="grid spacing, e.g. 0.25 or 1/4")
    p.add_argument("--out", type=Path, default=None)

    s = sub.add_parser("solve", help="solve a discretised Hammerstein equation")
    s.add_argument("--fixture", default=None, help=f"one of {', '.join(SOLVE_FIXTURES)}")
    s.add_argument("--config", type=Path, default=None, help="problem config JSON")
    s.add_argument("--eps", type=float, default=1e-12, help="stopping tolerance (default 1e-12)")
    s.add_argument("--max-iter", type=int, default=1000, help="iteration cap (default 1000)")
    s.add_argument("--seeds", type=Path, default=None,
                   help="JSON array of starting vectors for solution-set exploration")
    s.add_argument("--override", action="store_true",
                   help="iterate even when the hypothesis audit fails (recorded in the report)")
    s.add_argument("--out", type=Path, default=None)
    return parser


def _read_json(path: Path):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None


def _env_seed() -> int:
    raw = os.environ.get("ORDFIX_SEED")
    if raw is None or raw == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"ORDFIX_SEED must be an integer, got {raw!r}") from None


def parse_config(argv) -> RunConfig:
    """Validate argv and load any referenced files.  Raises UsageError."""
    argv = list(argv)
    if not argv:
        raise UsageError("missing command; choose from verify, poset, solve")
    ns = _build_parser().parse_args(argv)
    cfg = RunConfig(command=ns.command, out=ns.out, seed=_env_seed())
    if ns.command == "verify":
        if ns.fixture not in counterexamples.FIXTURES:
            raise UsageError(f"unknown fixture {ns.fixture!r}")
        if ns.n_max is not None and ns.n_max < 3:
            raise UsageError("--n-max must be >= 3")
        cfg.fixture, cfg.n_max = ns.fixture, ns.n_max
    elif ns.command == "poset":
        if (ns.fixture is None) == (ns.config is None):
            raise UsageError("give exactly one of a fixture name or --config")
        if ns.fixture is not None and ns.fixture not in grid_examples.EXAMPLES:
            raise UsageError(f"unknown fixture {ns.fixture!r}")
        if ns.grid_step is not None:
            if ns.config is not None:
                raise UsageError("--grid-step applies to builtin fixtures only")
            try:
                cfg.grid_step = Fraction(ns.grid_step)
            except (ValueError, ZeroDivisionError):
                raise UsageError(f"bad --grid-step {ns.grid_step!r}") from None
        cfg.fixture = ns.fixture
        if ns.config is not None:
            cfg.config_path, cfg.config = ns.config, _read_json(ns.config)
        cfg.checks = (ns.check,) if ns.check else CHECKS
    else:
        if (ns.fixture is None) == (ns.config is None):
            raise UsageError("give exactly one of --fixture or --config")
        if ns.fixture is not None:
            if ns.fixture not in SOLVE_FIXTURES:
                raise UsageError(f"unknown fixture {ns.fixture!r}")
            cfg.fixture = ns.fixture
            cfg.config, cfg.override, _ = SOLVE_FIXTURES[ns.fixture]
        else:
            cfg.config_path, cfg.config = ns.config, _read_json(ns.config)
        if not ns.eps > 0:
            raise UsageError("--eps must be positive")
        if ns.max_iter < 1:
            raise UsageError("--max-iter must be >= 1")
        cfg.eps, cfg.max_iter = ns.eps, ns.max_iter
        cfg.override = cfg.override or ns.override
        if ns.seeds is not None:
            cfg.seeds_path, cfg.seeds = ns.seeds, _read_json(ns.seeds)
    return cfg


# ------------------------------------------------------------------ verify

def _run_verify(cfg: RunConfig) -> RunResult:
    report = counterexamples.verify_counterexample(cfg.fixture, cfg.n_max, {"seed": cfg.seed})
    payload = {
        "command": "verify",
        "fixture": cfg.fixture,
        "n_max": cfg.n_max if cfg.n_max is not None else counterexamples.DEFAULT_N_MAX[cfg.fixture],
        "seed": cfg.seed,
        "claims": report,
        "pass": report.passed,
    }
    return RunResult(EXIT_OK if report.passed else EXIT_FALSIFIED, payload)


# ------------------------------------------------------------------- poset

def _element(raw):
    if isinstance(raw, str):
        return raw
    if isinstance(raw, list) and raw and all(isinstance(c, (int, float, str)) and not isinstance(c, bool)
                                             for c in raw):
        try:
            return tuple(as_fraction(c) for c in raw)
        except (ValueError, ZeroDivisionError):
            pass
    raise UsageError(f"element must be a string or a coordinate list, got {raw!r}")


def _map_key(key: str, known: set):
    if key in known:
        return key
    try:
        return _element(json.loads(key))
    except json.JSONDecodeError:
        raise UsageError(f"map key {key!r} is not a declared element") from None


def load_poset_config(doc) -> tuple:
    """Interchange JSON -> (poset, T, x0).  Array order carries no meaning."""
    if not isinstance(doc, dict) or not {"elements", "leq", "map"} <= doc.keys():
        raise UsageError('poset config needs "elements", "leq" and "map"')
    elements = [_element(e) for e in doc["elements"]]
    if len(set(elements)) != len(elements):
        raise UsageError("duplicate element identifiers")
    if not isinstance(doc["leq"], list) or not all(isinstance(p, list) and len(p) == 2 for p in doc["leq"]):
        raise UsageError('"leq" must be an array of pairs')
    pairs = [(_element(a), _element(b)) for a, b in doc["leq"]]
    poset = validate_poset(sorted(elements, key=repr), pairs)
    known = set(e for e in elements if isinstance(e, str))
    if not isinstance(doc["map"], dict):
        raise UsageError('"map" must be an object')
    images = {}
    for key, vals in doc["map"].items():
        if not isinstance(vals, list):
            raise UsageError(f"image of {key!r} must be an array")
        images[_map_key(key, known)] = {_element(v) for v in vals}
    T = SetValuedMap(poset, images)
    if "x0" in doc:
        x0 = _element(doc["x0"])
    else:
        bottoms = poset.minimal(T.domain)
        if len(bottoms) != 1:
            raise UsageError('no "x0" given and the map domain has no unique minimal element')
        (x0,) = bottoms
    return poset, T, x0


def _run_poset(cfg: RunConfig) -> RunResult:
    payload: dict = {"command": "poset", "checks": list(cfg.checks)}
    ok = True
    expected = None
    cited = None
    if cfg.fixture is not None:
        ex = grid_examples.builtin_example(cfg.fixture, cfg.grid_step)
        poset, T, x0, expected = ex.poset, ex.T, ex.x0, ex.expected_fixed
        cited = grid_examples.cited_witness(cfg.fixture)
        payload["fixture"] = cfg.fixture
        payload["grid_step"] = cfg.grid_step or grid_examples.DEFAULT_STEP[cfg.fixture]
    else:
        poset, T, x0 = load_poset_config(cfg.config)
        payload["config"] = str(cfg.config_path)
    payload["elements"] = len(poset)
    payload["x0"] = x0

    fixed = None
    if "thm3.9" in cfg.checks:
        try:
            rep = verify_fixed_point_theorem(poset, T.domain, T, x0)
            concl_ok = all(c[1] for c in rep.conclusion_log)
            payload["theorem"] = {"hypotheses_pass": True, "conclusions_pass": concl_ok, "report": rep}
            ok &= concl_ok
            fixed = rep.fixed_points
        except HypothesisFailed as exc:
            payload["theorem"] = {"hypotheses_pass": False, "failed": exc.name,
                                  "witness": exc.witness, "report": exc.report}
            ok = False
    if fixed is None:
        fixed = frozenset(x for x in T.domain if x in T(x))
    payload["fixed_points"] = fixed
    if expected is not None:
        match = fixed == expected
        payload["fixed_points_match_expected"] = match
        ok &= match

    if "sublattice" in cfg.checks:
        host = poset.restrict(T.domain)
        candidates = [cited[:2]] if cited else []
        flag, witness = is_sublattice(host, fixed, candidates)
        entry = {"is_sublattice": flag, "witness": witness}
        if cited is not None:
            # the fixed set is expected to fail closure exactly at the cited pair
            entry["matches_cited"] = (not flag) and tuple(witness) == tuple(cited)
            ok &= entry["matches_cited"]
        payload["sublattice"] = entry
    payload["pass"] = ok
    return RunResult(EXIT_OK if ok else EXIT_FALSIFIED, payload)


# ------------------------------------------------------------------- solve

def _oracle_check(problem, report) -> dict | None:
    if problem.kernel.family != "separable":
        return None
    g, h = problem.kernel.params
    try:
        orc = hammerstein.separable_oracle(g, h, problem.nonlinearity, problem.grid)
    except (hammerstein.NoBracket, ValueError) as exc:
        return {"error": str(exc), "pass": False}
    gap = float(np.max(np.abs(orc.solution - report.solution)))
    return {"c": orc.c, "sup_gap": gap, "tolerance": 1e-6, "pass": gap <= 1e-6}


def _seed_vectors(cfg: RunConfig, n: int) -> list:
    if not isinstance(cfg.seeds, list) or not cfg.seeds:
        raise UsageError("seeds file must hold a nonempty JSON array")
    out = []
    for i, s in enumerate(cfg.seeds):
        if s == "theta":
            out.append(np.zeros(n))
            continue
        if not isinstance(s, list) or len(s) != n:
            raise UsageError(f"seed {i} must be \"theta\" or an array of {n} numbers")
        try:
            vec = np.array(s, dtype=float)
        except (TypeError, ValueError):
            raise UsageError(f"seed {i} is not numeric") from None
        if not np.all(np.isfinite(vec)):
            raise UsageError(f"seed {i} is not finite")
        out.append(vec)
    return out


def _run_solve(cfg: RunConfig) -> RunResult:
    problem = hammerstein.HammersteinProblem.from_config(cfg.config)
    payload: dict = {"command": "solve", "problem": problem.to_config(), "override": cfg.override,
                     "eps": cfg.eps, "max_iter": cfg.max_iter, "seed": cfg.seed}
    if cfg.fixture:
        payload["fixture"] = cfg.fixture
    seeds = _seed_vectors(cfg, len(problem.grid)) if cfg.seeds is not None else None
    audit = hammerstein.audit_conditions(problem, seed=cfg.seed)
    payload["condition_log"] = audit
    try:
        report = hammerstein.monotone_solve(problem, cfg.eps, cfg.max_iter, override=cfg.override,
                                            audit=audit)
    except hammerstein.AuditFailed:
        payload["outcome"] = "audit_failed"
        payload["pass"] = False
        return RunResult(EXIT_FALSIFIED, payload)
    except hammerstein.MonotonicityBroken as exc:
        payload["outcome"] = "monotonicity_broken"
        payload["monotonicity_broken"] = {"k": exc.k, "node": exc.node, "drop": exc.drop}
        payload["pass"] = False
        return RunResult(EXIT_FALSIFIED, payload)
    except hammerstein.NoConvergence as exc:
        payload["outcome"] = "no_convergence"
        payload["no_convergence"] = {"max_iter": exc.max_iter, "defect": exc.defect}
        payload["pass"] = False
        return RunResult(EXIT_FALSIFIED, payload)
    payload["outcome"] = "converged"
    payload["report"] = report
    ok = report.passed
    oracle = _oracle_check(problem, report)
    if oracle is not None:
        payload["oracle"] = oracle
        ok &= oracle["pass"]
    if seeds is not None:
        try:
            exploration = hammerstein.explore_solution_set(problem, seeds, cfg.eps, cfg.max_iter)
        except hammerstein.BadSeed as exc:
            raise UsageError(str(exc)) from None
        except (hammerstein.MonotonicityBroken, hammerstein.NoConvergence) as exc:
            payload["exploration"] = {"error": str(exc)}
            ok = False
        else:
            payload["exploration"] = exploration
    payload["pass"] = ok
    return RunResult(EXIT_OK if ok else EXIT_FALSIFIED, payload)


# --------------------------------------------------------------- dispatch

_INVALID = (
    UsageError,
    counterexamples.BadParams,
    grid_examples.BadGridStep,
    PosetError,
    NotALattice,
    BudgetExceeded,
    hammerstein.BadConfig,
    hammerstein.BadRule,
    hammerstein.BadCount,
    hammerstein.EvalFailure,
    hammerstein.LambdaOverflow,
)


def run(cfg: RunConfig) -> RunResult:
    """Execute the workflow named by cfg; invalid input maps to exit code 2."""
    handler = {"verify": _run_verify, "poset": _run_poset, "solve": _run_solve}[cfg.command]
    try:
        return handler(cfg)
    except _INVALID as exc:
        return RunResult(EXIT_INVALID, {"command": cfg.command, "error": type(exc).__name__,
                                        "message": str(exc), "pass": False})


def emit_report(result: RunResult, path: Path | None = None, stream=None) -> str:
    """Serialise canonically (NaN rejected before anything is written)."""
    text = canonical_json(result.payload)
    if path is None:
        (stream or sys.stdout).write(text)
    else:
        Path(path).write_text(text)
    return text


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
    except UsageError as exc:
        print(f"ordfix: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    result = run(cfg)
    try:
        emit_report(result, cfg.out)
    except (OSError, ValueError) as exc:
        print(f"ordfix: cannot write report: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
