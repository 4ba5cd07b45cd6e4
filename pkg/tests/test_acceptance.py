"""Exit criteria. Each test prints one ``[criterion N] PASS|FAIL`` line.

Run alone with ``pytest tests/test_acceptance.py -v -s``.
"""

from __future__ import annotations

import csv
import io
import itertools
import time
from dataclasses import dataclass

import numpy as np
import pytest

from backnet.hybrid_planner import solve_hybrid
from backnet.model import Plan, cents, check_feasibility, path_diversity, plan_cost
from backnet.of_planner import of_planning_rounds
from backnet.oracle import brute_force_of, brute_force_original, redundancy_check
from backnet.simharness import ExperimentConfig, generate_instance, run_experiment

from .oracles import max_disjoint_path_set

pytestmark = pytest.mark.acceptance

SEED = 20_260_101


def report(number: int, ok: bool, detail: str) -> None:
    print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'} {detail}")


def cells(Ms, Ks):
    return [(m, k) for m in Ms for k in Ks if k < m]


# --- criterion 1 / 6 / 8: OF planner against the OF oracle ------------------


@dataclass
class OfRun:
    M: int
    K: int
    trial: int
    of_cost: float
    oracle_cost: float
    nested: bool


def run_of_sweep(seed: int) -> tuple[list[OfRun], str]:
    cfg = ExperimentConfig(seed=seed)
    runs = []
    grid = cells((3, 4, 5, 6), (1, 2, 3))
    per_cell = -(-200 // len(grid))
    for M, K in grid:
        for t in range(per_cell):
            p = generate_instance(cfg, M, K, t)
            rounds = of_planning_rounds(p)
            nested = all(
                np.array_equal(a.plan.X & b.plan.X, a.plan.X) for a, b in zip(rounds, rounds[1:])
            )
            runs.append(
                OfRun(M, K, t, plan_cost(rounds[-1].plan, p.costs), brute_force_of(p).cost, nested)
            )
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("M", "K", "trial", "of_cost", "oracle_cost"))
    for r in runs:
        w.writerow((r.M, r.K, r.trial, repr(r.of_cost), repr(r.oracle_cost)))
    return runs, buf.getvalue()


@pytest.fixture(scope="module")
def of_sweep():
    t0 = time.perf_counter()
    runs, text = run_of_sweep(SEED)
    return runs, text, time.perf_counter() - t0


def test_criterion_1_of_planner_matches_oracle(of_sweep):
    runs, _, elapsed = of_sweep
    assert len(runs) >= 200
    bad = [r for r in runs if cents(r.of_cost) != cents(r.oracle_cost)]
    by_cell = {}
    for r in bad:
        by_cell[(r.M, r.K)] = by_cell.get((r.M, r.K), 0) + 1
    ok = not bad and elapsed < 120
    report(
        1, ok,
        f"{len(runs) - len(bad)}/{len(runs)} instances cost-equal to the exhaustive OF optimum "
        f"({elapsed:.1f}s); mismatches per (M,K): {dict(sorted(by_cell.items()))}",
    )
    assert elapsed < 120
    assert not bad, f"{len(bad)} of {len(runs)} OF plans are dearer than the exhaustive optimum"


def test_criterion_6_rounds_are_nested(of_sweep):
    runs, _, _ = of_sweep
    nested = sum(r.nested for r in runs)
    report(6, nested == len(runs), f"{nested}/{len(runs)} runs nested round over round")
    assert nested == len(runs)


# --- criteria 2 / 3: hybrid planner feasibility and the sandwich bound -------


@pytest.fixture(scope="module")
def hybrid_sweep():
    cfg = ExperimentConfig(seed=SEED + 1)
    grid = cells(range(3, 11), (1, 2, 3))
    per_cell = -(-500 // len(grid))
    out = []
    t0 = time.perf_counter()
    for M, K in grid:
        for t in range(per_cell):
            p = generate_instance(cfg, M, K, t)
            res = solve_hybrid(p)
            out.append((p, res, check_feasibility(res.plan, p)))
    return out, time.perf_counter() - t0


def test_criterion_2_hybrid_plans_feasible(hybrid_sweep):
    runs, elapsed = hybrid_sweep
    assert len(runs) >= 500
    feasible = sum(rep.overall for _, _, rep in runs)
    ok = feasible == len(runs) and elapsed < 300
    report(2, ok, f"{feasible}/{len(runs)} hybrid plans pass C1-C4 ({elapsed:.1f}s)")
    assert feasible == len(runs)
    assert elapsed < 300


def test_criterion_3_sandwich(hybrid_sweep):
    runs, _ = hybrid_sweep
    checked, holds, gaps = 0, 0, []
    for p, res, _ in runs:
        if p.M > 5:
            continue
        oracle = brute_force_original(p).cost
        checked += 1
        if oracle <= res.hybrid_plan_cost + 1e-6 and res.hybrid_plan_cost <= res.of_plan_cost + 1e-6:
            holds += 1
        gaps.append((res.hybrid_plan_cost - oracle) / oracle)
    report(
        3, holds == checked,
        f"{holds}/{checked} instances satisfy oracle <= hybrid <= OF; "
        f"mean hybrid-vs-oracle relative gap {np.mean(gaps):.4f} (max {np.max(gaps):.4f})",
    )
    assert checked > 0 and holds == checked


# --- criterion 4: redundancy of the node constraints for OF-only plans ------


def test_criterion_4_redundancy():
    cfg = ExperimentConfig(seed=SEED + 2)
    grid = cells((2, 3, 4), (1, 2, 3))
    per_cell = -(-100 // len(grid))
    results = [
        redundancy_check(generate_instance(cfg, M, K, t)) for M, K in grid for t in range(per_cell)
    ]
    report(4, all(results), f"{sum(results)}/{len(results)} instances confirm redundancy")
    assert len(results) >= 100 and all(results)


# --- criterion 5: max-flow engine against exhaustive path enumeration -------


def graph_corpus(n_graphs: int, seed: int):
    rng = np.random.default_rng(seed)
    corpus = []
    while len(corpus) < n_graphs:
        n = int(rng.integers(2, 7))
        pairs = list(itertools.combinations(range(n), 2))
        k = int(rng.integers(0, min(9, len(pairs)) + 1))
        picked = rng.choice(len(pairs), size=k, replace=False)
        corpus.append((n, [pairs[i] for i in sorted(picked)]))
    return corpus


def test_criterion_5_connectivity_engine():
    t0 = time.perf_counter()
    corpus = graph_corpus(1000, SEED + 3)
    mismatches, queries = 0, 0
    for n, edges in corpus:
        plan = Plan.from_links(n, of_links=edges)
        for s, t in itertools.combinations(range(n), 2):
            queries += 1
            if path_diversity(plan, s, t) != max_disjoint_path_set(edges, s, t):
                mismatches += 1
    elapsed = time.perf_counter() - t0
    ok = mismatches == 0 and elapsed < 60
    report(5, ok, f"{queries - mismatches}/{queries} pair queries agree over {len(corpus)} graphs ({elapsed:.1f}s)")
    assert mismatches == 0 and elapsed < 60


# --- criteria 7 / 8: Monte Carlo trends and determinism ---------------------

TREND_CONFIG = ExperimentConfig(M_values=(5, 6, 7), K_values=(1, 2, 3), trials=100, seed=SEED + 4)


@pytest.fixture(scope="module")
def trend_run():
    t0 = time.perf_counter()
    res = run_experiment(TREND_CONFIG)
    return res, time.perf_counter() - t0


def test_criterion_7_trends(trend_run):
    res, elapsed = trend_run
    agg = {(a.M, a.K): a for a in res.aggregate}
    failed = sum(a.failed for a in res.aggregate)
    a_ok = all(a.mean_hybrid_cost <= a.mean_of_cost for a in agg.values())
    b_ok = c_ok = True
    for M in TREND_CONFIG.M_values:
        seq = [agg[(M, K)] for K in TREND_CONFIG.K_values]
        for lo, hi in zip(seq, seq[1:]):
            b_ok &= hi.mean_of_fraction <= lo.mean_of_fraction
            c_ok &= hi.mean_hybrid_cost >= lo.mean_hybrid_cost and hi.mean_of_cost >= lo.mean_of_cost
    ok = a_ok and b_ok and c_ok and failed == 0 and elapsed < 600
    fractions = {k: round(v.mean_of_fraction, 3) for k, v in sorted(agg.items())}
    report(
        7, ok,
        f"(a) hybrid<=OF {a_ok}; (b) OF fraction non-increasing in K {b_ok}; "
        f"(c) costs non-decreasing in K {c_ok}; failed trials {failed}; {elapsed:.1f}s; "
        f"OF fractions {fractions}",
    )
    assert a_ok and b_ok and c_ok and failed == 0 and elapsed < 600


def test_criterion_8_determinism(of_sweep, trend_run):
    _, of_text, _ = of_sweep
    res, _ = trend_run
    _, of_again = run_of_sweep(SEED)
    trend_again = run_experiment(TREND_CONFIG).aggregate_csv()
    same_of = of_text == of_again
    same_trend = res.aggregate_csv() == trend_again
    report(8, same_of and same_trend, f"OF sweep CSV identical {same_of}; trend aggregate CSV identical {same_trend}")
    assert same_of and same_trend
