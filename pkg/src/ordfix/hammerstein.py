"""Quadrature discretisation and monotone iteration for Hammerstein equations.

    x(t) = integral over [a, b] of T(t, s) f(s, x(s)) ds

is replaced by x_i = sum_j w_j T(t_i, s_j) f(s_j, x_j) on a quadrature grid.
Starting from theta = 0 the iterates x_{k+1} = F x_k increase nodewise when
T > 0 and f(s, .) is nondecreasing with f(s, 0) > 0; the ball condition keeps
them inside the p-norm ball of radius gamma.

Row sums use ``math.fsum`` so results do not depend on BLAS threading.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ordfix.report import ClaimReport

RULES = ("trapezoid", "gauss_legendre")
ORDER_SLACK = 1e-12
AUDIT_SLACK = 1e-12


class BadRule(ValueError):
    pass


class BadCount(ValueError):
    pass


class BadConfig(ValueError):
    pass


class LambdaOverflow(ArithmeticError):
    pass


class EvalFailure(ArithmeticError):
    pass


class AuditFailed(RuntimeError):
    def __init__(self, log: ClaimReport):
        bad = ", ".join(c.claim for c in log.failures())
        super().__init__(f"hypothesis audit failed: {bad}")
        self.log = log


class MonotonicityBroken(RuntimeError):
    def __init__(self, k: int, node: int, drop: float):
        super().__init__(f"iterate {k} drops below iterate {k - 1} at node {node} by {drop:.3e}")
        self.k = k
        self.node = node
        self.drop = drop


class NoConvergence(RuntimeError):
    def __init__(self, max_iter: int, defect: float):
        super().__init__(f"no convergence after {max_iter} iterations (defect {defect:.3e})")
        self.max_iter = max_iter
        self.defect = defect


class NoBracket(RuntimeError):
    def __init__(self, scanned: float):
        super().__init__(f"no sign change of the scalar defect on [-{scanned}, {scanned}]")
        self.scanned = scanned


class BadSeed(ValueError):
    def __init__(self, index: int):
        super().__init__(f"seed {index} is neither below nor above its image")
        self.index = index


# ------------------------------------------------------------------ grids

@dataclass(frozen=True)
class QuadratureGrid:
    a: float
    b: float
    nodes: np.ndarray
    weights: np.ndarray
    rule: str

    def __len__(self):
        return len(self.nodes)


def build_grid(a: float, b: float, count: int, rule: str = "trapezoid") -> QuadratureGrid:
    a, b = float(a), float(b)
    if not a < b:
        raise BadConfig(f"domain [{a}, {b}] is empty")
    if rule not in RULES:
        raise BadRule(f"unknown rule {rule!r}; choose from {', '.join(RULES)}")
    if int(count) != count or count < 2:
        raise BadCount(f"node count must be an integer >= 2, got {count!r}")
    count = int(count)
    if rule == "trapezoid":
        nodes = np.linspace(a, b, count)
        h = (b - a) / (count - 1)
        weights = np.full(count, h)
        weights[0] = weights[-1] = h / 2
    else:
        x, w = np.polynomial.legendre.leggauss(count)
        half = (b - a) / 2
        nodes = a + half * (x + 1)
        weights = half * w
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureGrid(a, b, nodes, weights, rule)


# ------------------------------------------------------- parametric families

def _num(spec: dict, key: str, default=None) -> float:
    if key not in spec:
        if default is None:
            raise BadConfig(f"missing parameter {key!r} in {spec}")
        return float(default)
    value = spec[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise BadConfig(f"parameter {key!r} must be a number, got {value!r}")
    if not math.isfinite(value):
        raise BadConfig(f"parameter {key!r} must be finite")
    return float(value)


@dataclass(frozen=True)
class Profile:
    """One-variable factor of a separable kernel."""

    family: str
    params: tuple

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.family == "constant":
            (c,) = self.params
            return np.full_like(t, c)
        if self.family == "affine":
            c0, c1 = self.params
            return c0 + c1 * t
        if self.family == "exp":
            c, k = self.params
            return c * np.exp(k * t)
        raise BadConfig(f"unknown profile {self.family!r}")

    @classmethod
    def from_json(cls, spec) -> "Profile":
        if not isinstance(spec, dict) or "family" not in spec:
            raise BadConfig(f"profile must be an object with a family, got {spec!r}")
        fam = spec["family"]
        if fam == "constant":
            return cls(fam, (_num(spec, "value"),))
        if fam == "affine":
            return cls(fam, (_num(spec, "c0"), _num(spec, "c1")))
        if fam == "exp":
            return cls(fam, (_num(spec, "c"), _num(spec, "k")))
        raise BadConfig(f"unknown profile family {fam!r}")

    def to_json(self) -> dict:
        keys = {"constant": ("value",), "affine": ("c0", "c1"), "exp": ("c", "k")}[self.family]
        return {"family": self.family, **dict(zip(keys, self.params))}


@dataclass(frozen=True)
class Kernel:
    """T(t, s) from a closed family: constant, affine, separable g(t)h(s), gaussian."""

    family: str
    params: tuple

    def matrix(self, t, s) -> np.ndarray:
        t = np.asarray(t, dtype=float)[:, None]
        s = np.asarray(s, dtype=float)[None, :]
        if self.family == "constant":
            (c,) = self.params
            return np.full((t.shape[0], s.shape[1]), c)
        if self.family == "affine":
            c0, ct, cs = self.params
            return c0 + ct * t + cs * s
        if self.family == "separable":
            g, h = self.params
            return g(t) * h(s)
        if self.family == "gaussian":
            amp, width = self.params
            return amp * np.exp(-((t - s) ** 2) / (2 * width**2))
        raise BadConfig(f"unknown kernel {self.family!r}")

    def __call__(self, t: float, s: float) -> float:
        return float(self.matrix([t], [s])[0, 0])

    @classmethod
    def from_json(cls, spec) -> "Kernel":
        if not isinstance(spec, dict) or "family" not in spec:
            raise BadConfig(f"kernel must be an object with a family, got {spec!r}")
        fam = spec["family"]
        if fam == "constant":
            return cls(fam, (_num(spec, "value"),))
        if fam == "affine":
            return cls(fam, (_num(spec, "c0"), _num(spec, "ct", 0), _num(spec, "cs", 0)))
        if fam == "separable":
            if "g" not in spec or "h" not in spec:
                raise BadConfig("separable kernel needs profiles g and h")
            return cls(fam, (Profile.from_json(spec["g"]), Profile.from_json(spec["h"])))
        if fam == "gaussian":
            width = _num(spec, "width")
            if width <= 0:
                raise BadConfig("gaussian width must be positive")
            return cls(fam, (_num(spec, "amplitude"), width))
        raise BadConfig(f"unknown kernel family {fam!r}")

    def to_json(self) -> dict:
        if self.family == "separable":
            g, h = self.params
            return {"family": "separable", "g": g.to_json(), "h": h.to_json()}
        keys = {"constant": ("value",), "affine": ("c0", "ct", "cs"),
                "gaussian": ("amplitude", "width")}[self.family]
        return {"family": self.family, **dict(zip(keys, self.params))}


@dataclass(frozen=True)
class Nonlinearity:
    """f(s, u) from a closed family; none of them depend on s.

    constant: a.  affine: clip(a + b u, lo, hi).  bounded_sigmoid:
    a + b u / (1 + |u|).  arctan: a + b atan(u).
    """

    family: str
    params: tuple

    def __call__(self, s, u):
        u = np.asarray(u, dtype=float)
        if self.family == "constant":
            (a,) = self.params
            return np.full_like(u, a)
        if self.family == "affine":
            a, b, lo, hi = self.params
            return np.clip(a + b * u, lo, hi)
        if self.family == "bounded_sigmoid":
            a, b = self.params
            return a + b * u / (1 + np.abs(u))
        if self.family == "arctan":
            a, b = self.params
            return a + b * np.arctan(u)
        raise BadConfig(f"unknown nonlinearity {self.family!r}")

    @classmethod
    def from_json(cls, spec) -> "Nonlinearity":
        if not isinstance(spec, dict) or "family" not in spec:
            raise BadConfig(f"nonlinearity must be an object with a family, got {spec!r}")
        fam = spec["family"]
        if fam == "constant":
            return cls(fam, (_num(spec, "a"),))
        if fam == "affine":
            lo = _num(spec, "lo") if "lo" in spec else -math.inf
            hi = _num(spec, "hi") if "hi" in spec else math.inf
            if lo > hi:
                raise BadConfig("affine clamp needs lo <= hi")
            return cls(fam, (_num(spec, "a"), _num(spec, "b"), lo, hi))
        if fam in ("bounded_sigmoid", "arctan"):
            return cls(fam, (_num(spec, "a"), _num(spec, "b")))
        raise BadConfig(f"unknown nonlinearity family {fam!r}")

    def to_json(self) -> dict:
        if self.family == "constant":
            return {"family": "constant", "a": self.params[0]}
        if self.family == "affine":
            a, b, lo, hi = self.params
            out = {"family": "affine", "a": a, "b": b}
            if math.isfinite(lo):
                out["lo"] = lo
            if math.isfinite(hi):
                out["hi"] = hi
            return out
        return {"family": self.family, "a": self.params[0], "b": self.params[1]}


# ----------------------------------------------------------------- problem

@dataclass(frozen=True)
class HammersteinProblem:
    grid: QuadratureGrid
    kernel: Kernel
    nonlinearity: Nonlinearity
    p: float = 2.0
    gamma: float = 1.0
    K: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.p > 1:
            raise BadConfig(f"exponent p={self.p} must exceed 1")
        if not self.gamma > 0:
            raise BadConfig(f"radius gamma={self.gamma} must be positive")
        K = self.kernel.matrix(self.grid.nodes, self.grid.nodes)
        if not np.all(np.isfinite(K)):
            raise EvalFailure("kernel is not finite at some node pair")
        K.setflags(write=False)
        object.__setattr__(self, "K", K)

    @property
    def q(self) -> float:
        return self.p / (self.p - 1)

    def norm(self, x) -> float:
        """Weighted discrete p-norm."""
        x = np.asarray(x, dtype=float)
        return math.fsum(self.grid.weights * np.abs(x) ** self.p) ** (1 / self.p)

    def f_at_nodes(self, x) -> np.ndarray:
        with np.errstate(all="ignore"):
            fx = self.nonlinearity(self.grid.nodes, x)
        if not np.all(np.isfinite(fx)):
            raise EvalFailure("nonlinearity is not finite at some node")
        return fx

    @classmethod
    def from_config(cls, cfg) -> "HammersteinProblem":
        if not isinstance(cfg, dict):
            raise BadConfig("problem config must be a JSON object")
        missing = {"domain", "nodes", "kernel", "nonlinearity"} - cfg.keys()
        if missing:
            raise BadConfig(f"problem config lacks {sorted(missing)}")
        dom = cfg["domain"]
        if not (isinstance(dom, list) and len(dom) == 2):
            raise BadConfig("domain must be [a, b]")
        a = _num({"a": dom[0]}, "a")
        b = _num({"b": dom[1]}, "b")
        nodes = cfg["nodes"]
        if isinstance(nodes, bool) or not isinstance(nodes, int):
            raise BadCount(f"nodes must be an integer, got {nodes!r}")
        grid = build_grid(a, b, nodes, cfg.get("rule", "trapezoid"))
        return cls(
            grid,
            Kernel.from_json(cfg["kernel"]),
            Nonlinearity.from_json(cfg["nonlinearity"]),
            p=_num(cfg, "p", 2),
            gamma=_num(cfg, "gamma", 1),
        )

    def to_config(self) -> dict:
        return {
            "domain": [self.grid.a, self.grid.b],
            "nodes": len(self.grid),
            "rule": self.grid.rule,
            "p": self.p,
            "gamma": self.gamma,
            "kernel": self.kernel.to_json(),
            "nonlinearity": self.nonlinearity.to_json(),
        }


def compute_lambda(problem: HammersteinProblem) -> float:
    """sum_i w_i (sum_j w_j |T(t_i, s_j)|^q)^(p/q)."""
    w = problem.grid.weights
    q, p = problem.q, problem.p
    with np.errstate(over="ignore"):
        powered = np.abs(problem.K) ** q
    rows = [math.fsum(row) for row in powered * w[None, :]]
    try:
        outer = math.fsum(wi * r ** (p / q) for wi, r in zip(w, rows))
    except OverflowError as exc:
        raise LambdaOverflow(str(exc)) from None
    if not math.isfinite(outer):
        raise LambdaOverflow("lambda is not finite")
    return outer


def apply_F(problem: HammersteinProblem, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != problem.grid.nodes.shape:
        raise EvalFailure(f"x has shape {x.shape}, expected {problem.grid.nodes.shape}")
    wf = problem.grid.weights * problem.f_at_nodes(x)
    return np.array([math.fsum(row) for row in problem.K * wf[None, :]])


def residual(problem: HammersteinProblem, x) -> float:
    return problem.norm(np.asarray(x, dtype=float) - apply_F(problem, x))


# ------------------------------------------------------------------- audit

def _ball_points(problem: HammersteinProblem, samples: int, rng: np.random.Generator):
    """Random points of the gamma-ball plus sign patterns and single-node spikes on its sphere."""
    n = len(problem.grid)
    gamma = problem.gamma
    for _ in range(samples):
        v = rng.standard_normal(n)
        radius = gamma * rng.uniform() ** (1 / n)
        yield "random", v * (radius / problem.norm(v))
    patterns = {
        "plus": np.ones(n),
        "minus": -np.ones(n),
        "alternating": np.where(np.arange(n) % 2 == 0, 1.0, -1.0),
        "ramp": np.linspace(-1, 1, n),
    }
    for name, v in patterns.items():
        if problem.norm(v) > 0:
            yield name, v * (gamma / problem.norm(v))
    for j in range(n):
        for sign in (1.0, -1.0):
            v = np.zeros(n)
            v[j] = sign * gamma / problem.grid.weights[j] ** (1 / problem.p)
            yield f"spike{'+' if sign > 0 else '-'}{j}", v


def audit_conditions(problem: HammersteinProblem, ball_samples: int = 200, seed: int = 0,
                     ladder_size: int = 65) -> ClaimReport:
    """Check the four existence hypotheses on the discrete problem.

    The ball condition is audited on samples and is never exhaustive.
    """
    if ball_samples < 1:
        raise ValueError("ball_samples must be >= 1")
    log = ClaimReport()
    nodes = problem.grid.nodes
    try:
        lam = compute_lambda(problem)
        log.add("i_lambda_finite", "0 < lambda < inf", lam, lam > 0)
    except LambdaOverflow as exc:
        lam = math.inf
        log.add("i_lambda_finite", "0 < lambda < inf", str(exc), False)

    i, j = np.unravel_index(int(np.argmin(problem.K)), problem.K.shape)
    kmin = float(problem.K[i, j])
    log.add("ii_kernel_positive", "T(t_i, s_j) > 0 at every node pair",
            {"t": float(nodes[i]), "s": float(nodes[j]), "min_T": kmin}, kmin > 0)

    # u-ladder wide enough to reach every value a ball point can take at a node
    reach = problem.gamma / float(np.min(problem.grid.weights)) ** (1 / problem.p)
    ladder = np.union1d(np.linspace(-reach, reach, ladder_size), [0.0])
    worst = None
    for jj, s in enumerate(nodes):
        vals = problem.nonlinearity(np.full_like(ladder, s), ladder)
        steps = np.diff(vals)
        k = int(np.argmin(steps))
        if steps[k] < 0 and (worst is None or steps[k] < worst["step"]):
            worst = {"s": float(s), "u_lo": float(ladder[k]), "u_hi": float(ladder[k + 1]),
                     "step": float(steps[k])}
    log.add("iii_f_nondecreasing", "f(s_j, .) nondecreasing on a u-ladder at each node",
            worst if worst else {"ladder_points": int(ladder.size), "reach": reach}, worst is None)
    f0 = problem.nonlinearity(nodes, np.zeros_like(nodes))
    k0 = int(np.argmin(f0))
    log.add("iii_f_zero_positive", "f(s_j, 0) > 0 at each node",
            {"s": float(nodes[k0]), "f0": float(f0[k0])}, f0[k0] > 0)

    rng = np.random.default_rng(seed)
    budget = problem.gamma**problem.p / lam if lam > 0 else math.inf
    w = problem.grid.weights
    worst_val, worst_kind, count = -math.inf, None, 0
    for kind, x in _ball_points(problem, ball_samples, rng):
        fx = problem.f_at_nodes(x)
        val = math.fsum(w * np.abs(fx) ** problem.p)
        count += 1
        if val > worst_val:
            worst_val, worst_kind = val, kind
    ok = worst_val <= budget * (1 + AUDIT_SLACK)
    log.add("iv_ball_condition", "sum_j w_j |f(s_j, x_j)|^p <= gamma^p / lambda on sampled ball points",
            {"max_sampled": worst_val, "bound": budget, "worst_kind": worst_kind,
             "samples": count, "exhaustive": False}, ok)
    return log


# ------------------------------------------------------------------- solve

@dataclass
class SolveReport:
    iterates_count: int
    solution: np.ndarray
    residual_p: float
    norm_p: float
    monotone_ok: bool
    lam: float
    condition_log: ClaimReport
    converged: bool
    ball_ok: bool
    nonzero_ok: bool
    override: bool = False
    increments: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (self.converged and self.monotone_ok and self.ball_ok and self.nonzero_ok
                and self.condition_log.passed)

    def to_json(self) -> dict:
        return {
            "iterates_count": self.iterates_count,
            "solution": self.solution,
            "residual_p": self.residual_p,
            "norm_p": self.norm_p,
            "monotone_ok": self.monotone_ok,
            "lambda": self.lam,
            "condition_log": self.condition_log,
            "converged": self.converged,
            "ball_ok": self.ball_ok,
            "nonzero_ok": self.nonzero_ok,
            "override": self.override,
            "increments": self.increments,
        }


def _iterate(problem, x0, direction: int, eps: float, max_iter: int):
    """Monotone Picard iteration. direction=+1 expects increasing iterates, -1 decreasing.

    Returns (x_k, F x_k, k, increments, ball_ok) for the first x_k whose
    increment ||F x_k - x_k|| is below eps in both the p-norm and sup norm.
    """
    x = np.asarray(x0, dtype=float)
    increments = []
    ball_ok = problem.norm(x) <= problem.gamma * (1 + ORDER_SLACK)
    for k in range(1, max_iter + 1):
        y = apply_F(problem, x)
        step = direction * (y - x)
        node = int(np.argmin(step))
        if step[node] < -ORDER_SLACK:
            raise MonotonicityBroken(k, node, float(-step[node]))
        ball_ok = ball_ok and problem.norm(y) <= problem.gamma * (1 + ORDER_SLACK)
        d_p = problem.norm(y - x)
        d_sup = float(np.max(np.abs(y - x)))
        increments.append(d_p)
        if d_p < eps and d_sup < eps:
            return x, y, k, increments, ball_ok
        x = y
    raise NoConvergence(max_iter, increments[-1] if increments else math.inf)


def monotone_solve(problem: HammersteinProblem, eps: float = 1e-12, max_iter: int = 1000,
                   override: bool = False, audit: ClaimReport | None = None,
                   seed: int = 0) -> SolveReport:
    """Iterate F from theta until consecutive iterates agree to eps.

    Raises AuditFailed when a hypothesis fails and override is False.  The
    returned solution x satisfies ||F x - x||_p < eps.
    """
    log = audit if audit is not None else audit_conditions(problem, seed=seed)
    if not log.passed and not override:
        raise AuditFailed(log)
    lam = compute_lambda(problem)
    theta = np.zeros(len(problem.grid))
    x, _, k, increments, ball_ok = _iterate(problem, theta, +1, eps, max_iter)
    norm = problem.norm(x)
    return SolveReport(
        iterates_count=k,
        solution=x,
        residual_p=residual(problem, x),
        norm_p=norm,
        monotone_ok=True,
        lam=lam,
        condition_log=log,
        converged=True,
        ball_ok=ball_ok and norm <= problem.gamma * (1 + ORDER_SLACK),
        nonzero_ok=norm > 10 * eps,
        override=override,
        increments=increments,
    )


# ------------------------------------------------------------------ oracle

@dataclass(frozen=True)
class OracleResult:
    c: float
    solution: np.ndarray
    defect: float


def separable_oracle(g: Profile, h: Profile, nonlinearity: Nonlinearity, grid: QuadratureGrid,
                     tol: float = 1e-14, max_doublings: int = 60) -> OracleResult:
    """Solve c = sum_j w_j h(s_j) f(s_j, g(s_j) c) by bracketing and bisection.

    Independent of apply_F: works on the scalar reduction of a kernel g(t)h(s).
    """
    s, w = grid.nodes, grid.weights
    gs, hs = g(s), h(s)
    if np.any(gs <= 0):
        raise ValueError("g must be positive at the nodes")

    def phi(c: float) -> float:
        return math.fsum(w * hs * nonlinearity(s, gs * c)) - c

    if phi(0.0) == 0.0:
        return OracleResult(0.0, gs * 0.0, 0.0)
    r = 1.0
    for _ in range(max_doublings):
        if phi(-r) >= 0 >= phi(r):
            break
        r *= 2
    else:
        raise NoBracket(r)
    lo, hi = -r, r
    while True:
        mid = (lo + hi) / 2
        val = phi(mid)
        if abs(val) < tol or mid in (lo, hi):
            break
        if val > 0:
            lo = mid
        else:
            hi = mid
    return OracleResult(mid, gs * mid, abs(val))


# ------------------------------------------------------------ exploration

@dataclass
class ExplorationReport:
    fixed_points: list
    seed_to_point: list
    comparable: list
    all_comparable: bool
    maximal: list
    iterations: list

    def to_json(self) -> dict:
        return {
            "fixed_points": self.fixed_points,
            "seed_to_point": self.seed_to_point,
            "comparable": self.comparable,
            "all_comparable": self.all_comparable,
            "maximal": self.maximal,
            "iterations": self.iterations,
        }


def _nodewise_leq(x, y, tol) -> bool:
    return bool(np.all(x <= y + tol))


def explore_solution_set(problem: HammersteinProblem, seeds, eps: float = 1e-12,
                         max_iter: int = 1000, distinct_tol: float = 1e-8) -> ExplorationReport:
    """Run monotone iteration from each seed and compare the fixed points found.

    A sampled picture of the solution set: distinct points are those more
    than distinct_tol apart in the p-norm.
    """
    found: list[np.ndarray] = []
    seed_to_point, iterations = [], []
    for idx, seed in enumerate(seeds):
        x0 = np.asarray(seed, dtype=float)
        fx0 = apply_F(problem, x0)
        if _nodewise_leq(x0, fx0, ORDER_SLACK):
            direction = +1
        elif _nodewise_leq(fx0, x0, ORDER_SLACK):
            direction = -1
        else:
            raise BadSeed(idx)
        x, _, k, _, _ = _iterate(problem, x0, direction, eps, max_iter)
        iterations.append(k)
        for pos, y in enumerate(found):
            if problem.norm(x - y) <= distinct_tol:
                seed_to_point.append(pos)
                break
        else:
            found.append(x)
            seed_to_point.append(len(found) - 1)
    tol = max(distinct_tol, 1e-9)
    comparable = []
    for i in range(len(found)):
        for j in range(i + 1, len(found)):
            ok = _nodewise_leq(found[i], found[j], tol) or _nodewise_leq(found[j], found[i], tol)
            comparable.append([i, j, ok])
    maximal = [i for i, x in enumerate(found)
               if not any(j != i and _nodewise_leq(x, y, tol) and not _nodewise_leq(y, x, tol)
                          for j, y in enumerate(found))]
    return ExplorationReport(
        fixed_points=found,
        seed_to_point=seed_to_point,
        comparable=comparable,
        all_comparable=all(c[2] for c in comparable),
        maximal=maximal,
        iterations=iterations,
    )
