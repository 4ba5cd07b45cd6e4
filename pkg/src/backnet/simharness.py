"""Monte Carlo experiments over random placements, written out as CSV."""

from __future__ import annotations

import csv
import io
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from statistics import fmean
from typing import Any, Sequence

import numpy as np

from backnet.errors import BacknetError, InvalidInputError
from backnet.hybrid_planner import solve_hybrid
from backnet.model import LinkModels, Plan, ProblemInstance, Topology
from backnet.oracle import ORIGINAL_CAP, brute_force_original
from backnet.serialization import models_from_dict

log = logging.getLogger(__name__)

RNG_NAME = "numpy.random.Philox(SeedSequence([seed, M, trial]))"
MIN_SEPARATION_M = 1.0
TRIAL_COLUMNS = (
    "M", "K", "trial", "of_cost", "hybrid_cost", "oracle_cost", "of_fraction_hybrid",
    "runtime_ms", "of_fraction_of", "oracle_fraction", "hybrid_runtime_ms",
    "oracle_runtime_ms", "assumption_violated", "error",
)
AGGREGATE_COLUMNS = (
    "M", "K", "mean_of_cost", "mean_hybrid_cost", "mean_of_fraction",
    "mean_oracle_cost", "mean_of_fraction_of", "trials", "failed",
)


@dataclass(frozen=True)
class ExperimentConfig:
    M_values: tuple[int, ...] = (4, 5, 6, 7, 8)
    K_values: tuple[int, ...] = (1, 2, 3)
    trials: int = 100
    seed: int = 0
    area_side: float = 5_000.0
    alpha: float = 0.95
    D_t: float = 1.0
    models: LinkModels = field(default_factory=LinkModels)
    oracle_enabled: bool = False
    oracle_cap: int = ORIGINAL_CAP
    workers: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "M_values", tuple(int(m) for m in self.M_values))
        object.__setattr__(self, "K_values", tuple(int(k) for k in self.K_values))
        if self.trials < 1:
            raise InvalidInputError("trials must be >= 1")
        if any(m < 2 for m in self.M_values):
            raise InvalidInputError("every M must be >= 2")
        if not 0 <= self.seed < 2**64:
            raise InvalidInputError("seed must be a 64-bit unsigned integer")
        if self.area_side <= 0:
            raise InvalidInputError("area_side must be positive")

    def cells(self) -> list[tuple[int, int]]:
        """(M, K) pairs with K < M."""
        return [(m, k) for m in self.M_values for k in self.K_values if k < m]

    @classmethod
    def from_dict(cls, doc: dict[str, Any]) -> ExperimentConfig:
        known = {f.name for f in fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise InvalidInputError(f"unknown config keys: {sorted(unknown)}")
        doc = dict(doc)
        if "models" in doc:
            doc["models"] = models_from_dict(doc["models"])
        try:
            return cls(**doc)
        except TypeError as exc:
            raise InvalidInputError(str(exc)) from exc


@dataclass(frozen=True)
class TrialRecord:
    M: int
    K: int
    trial: int
    of_cost: float = math.nan
    hybrid_cost: float = math.nan
    oracle_cost: float | None = None
    of_fraction_hybrid: float = math.nan
    of_fraction_of: float = math.nan
    oracle_fraction: float | None = None
    hybrid_runtime_ms: float = 0.0
    oracle_runtime_ms: float | None = None
    assumption_violated: bool = False
    error: str = ""

    @property
    def ok(self) -> bool:
        return not self.error

    @property
    def runtime_ms(self) -> float:
        return self.hybrid_runtime_ms + (self.oracle_runtime_ms or 0.0)


def generate_instance(config: ExperimentConfig, M: int, K: int, trial: int) -> ProblemInstance:
    """Uniform placement in the square, keyed by ``(seed, M, trial)``.

    ``K`` does not enter the stream, so every K of a given (M, trial)
    plans over the same stations.
    """
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([config.seed, M, trial])))
    while True:
        pts = rng.uniform(0.0, config.area_side, size=(M, 2))
        d = np.sqrt(((pts[:, None] - pts[None]) ** 2).sum(-1))
        np.fill_diagonal(d, np.inf)
        if d.min() >= MIN_SEPARATION_M:
            break
    return ProblemInstance(Topology.from_positions(pts), K, config.alpha, config.D_t, config.models)


def of_fraction(plan: Plan) -> float:
    """Share of OF links among all used links (NaN for an empty plan)."""
    n_of, n_hy = len(plan.of_links()), len(plan.hybrid_links())
    return n_of / (n_of + n_hy) if n_of + n_hy else math.nan


def run_trial(config: ExperimentConfig, M: int, K: int, trial: int) -> TrialRecord:
    problem = generate_instance(config, M, K, trial)
    try:
        t0 = time.perf_counter()
        result = solve_hybrid(problem)
        hybrid_ms = (time.perf_counter() - t0) * 1e3
    except BacknetError as exc:
        return TrialRecord(M, K, trial, error=f"{type(exc).__name__}: {exc}")
    rec = TrialRecord(
        M, K, trial,
        of_cost=result.of_plan_cost,
        hybrid_cost=result.hybrid_plan_cost,
        of_fraction_hybrid=of_fraction(result.plan),
        of_fraction_of=of_fraction(result.of_plan),
        hybrid_runtime_ms=hybrid_ms,
        assumption_violated=result.assumption_violated,
    )
    if config.oracle_enabled and M <= config.oracle_cap:
        try:
            t0 = time.perf_counter()
            oracle = brute_force_original(problem, cap=config.oracle_cap)
            rec = replace(
                rec,
                oracle_cost=oracle.cost,
                oracle_fraction=of_fraction(oracle.plan),
                oracle_runtime_ms=(time.perf_counter() - t0) * 1e3,
            )
        except BacknetError as exc:
            rec = replace(rec, error=f"oracle {type(exc).__name__}: {exc}")
    return rec


def _run_cell_trial(args: tuple[ExperimentConfig, int, int, int]) -> TrialRecord:
    return run_trial(*args)


@dataclass(frozen=True)
class AggregateRow:
    M: int
    K: int
    mean_of_cost: float
    mean_hybrid_cost: float
    mean_of_fraction: float
    mean_oracle_cost: float | None
    mean_of_fraction_of: float
    trials: int
    failed: int


def _nanmean(values: Sequence[float]) -> float:
    vals = [v for v in values if v is not None and not math.isnan(v)]
    return fmean(vals) if vals else math.nan


def aggregate(records: Sequence[TrialRecord]) -> list[AggregateRow]:
    cells: dict[tuple[int, int], list[TrialRecord]] = {}
    for r in records:
        cells.setdefault((r.M, r.K), []).append(r)
    rows = []
    for (M, K), recs in sorted(cells.items()):
        ok = [r for r in recs if r.ok]
        oracle = [r.oracle_cost for r in ok if r.oracle_cost is not None]
        rows.append(
            AggregateRow(
                M, K,
                mean_of_cost=_nanmean([r.of_cost for r in ok]),
                mean_hybrid_cost=_nanmean([r.hybrid_cost for r in ok]),
                mean_of_fraction=_nanmean([r.of_fraction_hybrid for r in ok]),
                mean_oracle_cost=fmean(oracle) if oracle else None,
                mean_of_fraction_of=_nanmean([r.of_fraction_of for r in ok]),
                trials=len(recs),
                failed=len(recs) - len(ok),
            )
        )
    return rows


@dataclass(frozen=True)
class ExperimentResult:
    config: ExperimentConfig
    records: tuple[TrialRecord, ...]
    aggregate: tuple[AggregateRow, ...]

    def trials_csv(self) -> str:
        buf = io.StringIO()
        buf.write(_header(self.config))
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(TRIAL_COLUMNS)
        for r in self.records:
            w.writerow([
                r.M, r.K, r.trial, _fmt(r.of_cost), _fmt(r.hybrid_cost), _fmt(r.oracle_cost),
                _fmt(r.of_fraction_hybrid), _fmt(r.runtime_ms), _fmt(r.of_fraction_of),
                _fmt(r.oracle_fraction), _fmt(r.hybrid_runtime_ms), _fmt(r.oracle_runtime_ms),
                int(r.assumption_violated), r.error,
            ])
        return buf.getvalue()

    def aggregate_csv(self) -> str:
        buf = io.StringIO()
        buf.write(_header(self.config))
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(AGGREGATE_COLUMNS)
        for a in self.aggregate:
            w.writerow([
                a.M, a.K, _fmt(a.mean_of_cost), _fmt(a.mean_hybrid_cost), _fmt(a.mean_of_fraction),
                _fmt(a.mean_oracle_cost), _fmt(a.mean_of_fraction_of), a.trials, a.failed,
            ])
        return buf.getvalue()

    def write(self, out_dir: str | Path) -> tuple[Path, Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        trials, agg = out / "trials.csv", out / "aggregate.csv"
        trials.write_text(self.trials_csv())
        agg.write_text(self.aggregate_csv())
        return trials, agg


def _fmt(x: float | None) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    return repr(float(x))


def _header(config: ExperimentConfig) -> str:
    return (
        f"# rng={RNG_NAME} seed={config.seed} area_side_m={config.area_side!r}"
        " units=dollars,meters acceptance=trend-based (no published figure values)\n"
    )


def run_experiment(config: ExperimentConfig, out_dir: str | Path | None = None) -> ExperimentResult:
    jobs = [(config, M, K, t) for M, K in config.cells() for t in range(config.trials)]
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            records = list(pool.map(_run_cell_trial, jobs, chunksize=8))
    else:
        records = [_run_cell_trial(j) for j in jobs]
    records.sort(key=lambda r: (r.M, r.K, r.trial))
    failed = sum(not r.ok for r in records)
    if failed:
        log.warning("%d of %d trials failed", failed, len(records))
    result = ExperimentResult(config, tuple(records), tuple(aggregate(records)))
    if out_dir is not None:
        result.write(out_dir)
    return result
