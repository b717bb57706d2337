"""Acceptance criteria 1-12, one test each.

Run with ``pytest tests/test_acceptance.py -v``; the terminal summary prints
one PASS/FAIL line per criterion.
"""

from fractions import Fraction

import numpy as np
import pytest

from oracles import increasing_map, least_fixed_point, random_join_lattice, subset_leq
from ordfix import cli, counterexamples as cx, grid_examples as gx, hammerstein as hs
from ordfix.cone import (
    ConeSpec,
    NormSpec,
    Space,
    cone_pair_sampler,
    increasing_ice_cream_sequence,
    normality_constant,
    regularity_probe,
)
from ordfix.piecewise import PiecewisePoly
from ordfix.poset import (
    FinitePoset,
    is_inductive,
    is_sublattice,
    iterate_to_fixed_point,
    verify_fixed_point_theorem,
)

criterion = pytest.mark.criterion


@criterion(1, "ramp-at-zero chain in C[0,2]: norms, order, exact distances, domination")
def test_c01_ramp_at_zero_chain():
    xs = [cx.make_counterexample_chain("lemma_2_4", n) for n in range(1, 65)]
    assert all(cx.C02.norm_of(x) == 1 for x in xs)
    assert all(cx.C02.leq(a, b) for a, b in zip(xs, xs[1:]))
    for n in range(2, 65):
        for m in range(1, n):
            d = xs[n - 1] - xs[m - 1]
            # oracle: x_n - x_m is piecewise linear, so |.| peaks at a knot
            knots = {Fraction(0), Fraction(1, n), Fraction(1, m), Fraction(2)}
            peak = max(abs(d(t)) for t in knots)
            assert peak == cx.C02.dist(xs[n - 1], xs[m - 1]) == 1 - Fraction(m, n)
    v = PiecewisePoly.constant(1, 0, 2)
    assert all(cx.C02.leq(x, v) for x in xs)


@criterion(2, "0/1 vectors in truncated l_inf: unit pairwise distance, sup is all-ones")
def test_c02_truncated_linf_chain():
    M = 256
    space = Space(ConeSpec.componentwise(M), NormSpec("sup_abs"))
    xs = [cx.make_counterexample_chain("example_2_7", n, {"truncation": M}) for n in range(1, 65)]
    for i in range(64):
        for j in range(i + 1, 64):
            assert space.dist(xs[i], xs[j]) == 1
    family = np.vstack([cx.make_counterexample_chain("example_2_7", n, {"truncation": M})
                        for n in range(1, M + 1)])
    assert np.array_equal(family.max(axis=0), np.ones(M, dtype=np.int64))


@criterion(3, "ramp-after-one chain: monotone, unit norms, tail defect, 5 strict improvements")
def test_c03_ramp_after_one_chain():
    rep = cx.verify_counterexample("lemma_2_8", 64)
    for claim in ("increasing", "norm_equals_1", "pairwise_distance", "not_cauchy"):
        assert rep[claim].passed, rep[claim]
    assert rep["not_cauchy"].measured >= Fraction(1, 2)
    xs = [cx.ramp_after_one(n) for n in range(1, 65)]
    current, delta = PiecewisePoly.constant(1, 0, 2), Fraction(1, 2)
    for _ in range(5):
        nxt = cx.improve_upper_bound_2_8(current, delta)
        assert all(cx.C02.leq(x, nxt) for x in xs)
        assert cx.C02.leq(nxt, current) and nxt != current
        current, delta = nxt, delta / 2


@criterion(4, "smoothed-corner chain in C^1: norms, order, gaps, every dominating candidate refuted")
def test_c04_smoothed_corner_chain():
    params = {"lambda1": 0.9, "ratio": 0.49}
    lams = cx.lambda_sequence(params, 16)
    assert lams[0] == Fraction(9, 10)
    ys = [cx.make_counterexample_chain("lemma_2_9", n, params) for n in range(1, 17)]
    for y, lam in zip(ys, lams):
        assert cx.C1.norm_of(y) == 2 - lam / 2
    assert all(cx.C1.leq(a, b) for a, b in zip(ys, ys[1:]))
    for k in range(15):
        bound = 1 - lams[k + 1] / lams[k]
        assert cx.C1.dist(ys[k + 1], ys[k]) >= bound > Fraction(1, 2)
    rng = np.random.default_rng(0)
    candidates = [cx.random_dominating_candidate(rng) for _ in range(100)] + [cx.corner_candidate()]
    for cand in candidates:
        rep = cx.refute_upper_bound_2_9(cand, params=params)
        assert rep["candidate_rejected"].passed
        assert rep["derivative_jump_at_0"].measured >= 1 - 1e-6


@criterion(5, "ice-cream cone in R^2: equal-norm chains, full regularity probe")
def test_c05_ice_cream_cone():
    for seg in ("left", "right"):
        pts = [cx.make_counterexample_chain("lemma_2_11", k, {"segment": seg, "count": 11})
               for k in range(1, 12)]
        assert len(set(pts)) == 11
        for i, a in enumerate(pts):
            assert cx.R2_ICE.norm_of(a) == 1
            for b in pts[i + 1:]:
                assert cx.R2_ICE.leq(a, b) or cx.R2_ICE.leq(b, a)
    rng = np.random.default_rng(0)
    worst = 0.0
    for _ in range(1000):
        seq = increasing_ice_cream_sequence(rng, 2000, 1.0)
        rep = regularity_probe(cx.R2_ICE, list(seq), 1.0, mode="fully_regular", tail_start=1000)
        worst = max(worst, rep["tail_cauchy_defect"].measured)
    assert worst < 1e-6, worst


@criterion(6, "componentwise cone is normal with constant 1 for l1, l2 and sup norms")
def test_c06_normality():
    cone = ConeSpec.componentwise(4)
    for norm in (NormSpec("ell1"), NormSpec("ellp", p=2), NormSpec("sup_abs")):
        est = normality_constant(cone, norm, cone_pair_sampler(cone), 10_000, seed=0)
        assert est <= 1
        est_eq = normality_constant(cone, norm, cone_pair_sampler(cone, equal_fraction=0.1),
                                    10_000, seed=0)
        assert 1 - 1e-12 <= est_eq <= 1 + 1e-12


@criterion(7, "planar grid examples: fixed sets, cited non-sublattice pairs, theorem hypotheses")
def test_c07_grid_examples():
    steps = {"remark_3_11": Fraction(1, 4), "example_3_12_1": Fraction(1, 2),
             "example_3_12_2": Fraction(1, 4)}
    for name, step in steps.items():
        ex = gx.builtin_example(name, step)
        rep = verify_fixed_point_theorem(ex.poset, ex.T.domain, ex.T, ex.x0)
        assert [h[0] for h in rep.hypothesis_log if h[0].startswith("A")] == ["A1", "A2", "A3"]
        assert all(h[1] for h in rep.hypothesis_log)
        assert rep.fixed_points == ex.expected_fixed
        assert rep.is_inductive and rep.above_seed
        assert rep.maximal_elements and all(ex.poset.leq(ex.x0, m) for m in rep.maximal_elements)
        host = ex.poset.restrict(ex.T.domain)
        cited = gx.cited_witness(name)
        flag, witness = is_sublattice(host, rep.fixed_points, [cited[:2]])
        assert not flag and tuple(witness) == cited


@criterion(8, "Knaster-Tarski iteration reaches the least fixed point on 100 random lattices")
def test_c08_knaster_tarski():
    rng = np.random.default_rng(8)
    for _ in range(100):
        lattice = random_join_lattice(rng)
        assert len(lattice) <= 64
        poset = FinitePoset.from_relation(lattice, subset_leq)
        F = increasing_map(rng, lattice)
        lfp, steps = iterate_to_fixed_point(poset, F.__getitem__, 0)
        assert steps <= len(lattice)
        assert lfp == least_fixed_point(lattice, F)
        fixed = [x for x in lattice if F[x] == x]
        assert is_inductive(poset, fixed)[0]


@criterion(9, "Hammerstein constant fixture: lambda, two-step convergence, exact solution")
def test_c09_hammerstein_trivial():
    cfg, _, _ = cli.SOLVE_FIXTURES["trivial"]
    problem = hs.HammersteinProblem.from_config(cfg)
    assert len(problem.grid) == 129 and problem.grid.rule == "trapezoid"
    assert abs(hs.compute_lambda(problem) - 1) <= 1e-12
    rep = hs.monotone_solve(problem)
    assert rep.iterates_count <= 2
    assert np.max(np.abs(rep.solution - 1)) <= 1e-12
    assert rep.residual_p < 1e-12
    assert abs(rep.norm_p - 1) <= 1e-12 and rep.norm_p <= problem.gamma + 1e-12


@criterion(10, "Hammerstein separable fixture: lambda, audit, monotone iterates, oracle agreement")
def test_c10_hammerstein_separable():
    cfg, _, _ = cli.SOLVE_FIXTURES["separable"]
    problem = hs.HammersteinProblem.from_config(cfg)
    assert len(problem.grid) == 257
    assert abs(hs.compute_lambda(problem) - 7 / 3) <= 1e-6
    audit = hs.audit_conditions(problem)
    assert audit.passed, audit.failures()
    rep = hs.monotone_solve(problem, eps=1e-12)
    assert rep.monotone_ok
    # replay the iteration and check nodewise monotonicity independently
    x = np.zeros(len(problem.grid))
    for _ in range(rep.iterates_count):
        y = hs.apply_F(problem, x)
        assert np.all(y >= x - 1e-12)
        x = y
    assert rep.residual_p < 1e-10
    g, h = problem.kernel.params
    orc = hs.separable_oracle(g, h, problem.nonlinearity, problem.grid)
    assert np.max(np.abs(orc.solution - rep.solution)) <= 1e-6
    assert 0 < rep.norm_p <= problem.gamma


@criterion(11, "discrete isotonicity and Hoelder ball bound of the Hammerstein operator")
def test_c11_isotone_and_ball_invariant():
    cfg, _, _ = cli.SOLVE_FIXTURES["separable"]
    problem = hs.HammersteinProblem.from_config({**cfg, "nodes": 129})
    rng = np.random.default_rng(11)
    n = len(problem.grid)
    for _ in range(1000):
        x = rng.normal(size=n) * rng.uniform(0.1, 3)
        y = x + rng.uniform(0, 1, n) * (rng.uniform(size=n) < 0.5)
        assert np.all(hs.apply_F(problem, x) <= hs.apply_F(problem, y) + 1e-15)
    for _ in range(1000):
        v = rng.normal(size=n)
        x = v * (problem.gamma * rng.uniform() ** (1 / n) / problem.norm(v))
        assert problem.norm(hs.apply_F(problem, x)) <= problem.gamma + 1e-10


def _fixture_matrix():
    rows = [(["verify", name], 0) for name in cx.FIXTURES]
    rows += [(["poset", name], 0) for name in gx.EXAMPLES]
    rows += [(["solve", "--fixture", name], code) for name, (_, _, code) in cli.SOLVE_FIXTURES.items()]
    rows += [(["verify", "lemma_9_9"], 2), (["poset", "remark_3_11", "--grid-step", "0.3"], 2),
             (["solve", "--fixture", "separable", "--eps", "-1"], 2)]
    return rows


@criterion(12, "CLI determinism and exit-code contract on the full fixture matrix")
def test_c12_cli_determinism(tmp_path):
    for k, (argv, expected) in enumerate(_fixture_matrix()):
        outs = []
        for run in range(2):
            out = tmp_path / f"r{k}_{run}.json"
            code = cli.main(argv + ["--out", str(out)])
            assert code == expected, (argv, code)
            outs.append(out.read_bytes() if out.exists() else b"")
        assert outs[0] == outs[1], argv
