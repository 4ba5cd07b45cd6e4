"""``backnet`` command line.

Exit codes::

    0  success
    1  validate: plan is infeasible
    2  parse / usage error
    3  infeasible instance
    4  internal consistency failure
    5  exhaustive-search cap exceeded

stdout carries JSON or CSV only; human-readable messages go to stderr.
Set ``BACKNET_LOG`` to ``error``, ``info`` or ``debug`` for verbosity.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from pathlib import Path

from backnet.errors import (
    BacknetError,
    CapExceededError,
    InfeasibleError,
    InternalConsistencyError,
    InvalidInputError,
)
from backnet.hybrid_planner import solve_hybrid
from backnet.model import check_feasibility, plan_cost
from backnet.of_planner import of_planning
from backnet.oracle import ORIGINAL_CAP, brute_force_original
from backnet.serialization import load_instance, load_plan, plan_to_dict
from backnet.simharness import ExperimentConfig, run_experiment

EXIT_OK = 0
EXIT_INFEASIBLE_PLAN = 1
EXIT_PARSE = 2
EXIT_INFEASIBLE = 3
EXIT_INTERNAL = 4
EXIT_CAP = 5

log = logging.getLogger("backnet")


def _exit_code(exc: BacknetError) -> int:
    if isinstance(exc, InvalidInputError):
        return EXIT_PARSE
    if isinstance(exc, InfeasibleError):
        return EXIT_INFEASIBLE
    if isinstance(exc, InternalConsistencyError):
        return EXIT_INTERNAL
    if isinstance(exc, CapExceededError):
        return EXIT_CAP
    return EXIT_INTERNAL


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _json(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def cmd_plan(args: argparse.Namespace) -> int:
    problem = load_instance(args.instance)
    if args.planner == "of":
        plan = of_planning(problem)
        cost = plan_cost(plan, problem.costs)
        meta = {"planner": "of", "of_plan_cost": cost}
    else:
        result = solve_hybrid(problem)
        plan, cost = result.plan, result.hybrid_plan_cost
        meta = {"planner": "hybrid", **result.metadata()}
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("i", "j", "type"))
        for i, j in plan.of_links():
            w.writerow((i, j, "of"))
        for i, j in plan.hybrid_links():
            w.writerow((i, j, "hybrid"))
        _emit(buf.getvalue(), args.out)
    else:
        _emit(_json({**plan_to_dict(plan), "cost": cost, "metadata": meta}), args.out)
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    problem = load_instance(args.instance)
    plan = load_plan(args.plan, problem.M)
    report = check_feasibility(plan, problem)
    doc = report.to_dict()
    doc["cost"] = plan_cost(plan, problem.costs)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("constraint", "pass"))
        for key in ("C1_exclusivity", "C2_connectivity", "C3_reliability", "C4_rate"):
            v = doc[key]
            w.writerow((key, int(v if isinstance(v, bool) else v["pass"])))
        w.writerow(("overall", int(report.overall)))
        _emit(buf.getvalue(), args.out)
    else:
        _emit(_json(doc), args.out)
    return EXIT_OK if report.overall else EXIT_INFEASIBLE_PLAN


def cmd_oracle(args: argparse.Namespace) -> int:
    problem = load_instance(args.instance)
    cap = args.caps
    if problem.M > cap:
        raise CapExceededError(f"M={problem.M} exceeds the exhaustive cap of {cap}")
    if problem.K >= problem.M:
        raise InfeasibleError("infeasible: K must be < M")
    oracle = brute_force_original(problem, cap=cap)
    hybrid = solve_hybrid(problem)

    def gap(cost: float) -> dict:
        rel = (cost - oracle.cost) / oracle.cost if oracle.cost > 0 else 0.0
        return {"absolute": cost - oracle.cost, "relative": rel}

    doc = {
        "oracle_cost": oracle.cost,
        "hybrid_cost": hybrid.hybrid_plan_cost,
        "of_cost": hybrid.of_plan_cost,
        "gaps": {"hybrid": gap(hybrid.hybrid_plan_cost), "of": gap(hybrid.of_plan_cost)},
        "oracle_explored": oracle.explored,
        "oracle_plan": plan_to_dict(oracle.plan),
    }
    _emit(_json(doc), args.out)
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    doc = {}
    if args.config:
        try:
            doc = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidInputError(f"cannot read {args.config}: {exc}") from exc
    if args.seed is not None:
        doc["seed"] = args.seed
    config = ExperimentConfig.from_dict(doc)
    out_dir = args.out or "."
    result = run_experiment(config, out_dir)
    failed = sum(not r.ok for r in result.records)
    if failed:
        print(f"{failed} of {len(result.records)} trials failed; see trials.csv", file=sys.stderr)
    print(f"wrote {out_dir}/trials.csv and {out_dir}/aggregate.csv", file=sys.stderr)
    sys.stdout.write(result.aggregate_csv())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="backnet", description="Resilient OF / hybrid RF-FSO backhaul planning.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, instance: bool = True) -> None:
        if instance:
            p.add_argument("--instance", required=True, help="problem instance JSON")
        p.add_argument("--out", help="write output here instead of stdout")
        p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("plan", help="compute a plan")
    common(p)
    p.add_argument("--planner", choices=("of", "hybrid"), default="hybrid")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("validate", help="check a plan against every constraint")
    common(p)
    p.add_argument("--plan", required=True, help="plan JSON")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("oracle", help="compare planners with the exhaustive optimum")
    common(p)
    p.add_argument("--caps", type=int, default=ORIGINAL_CAP, help="largest M to search exhaustively")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("simulate", help="run a Monte Carlo experiment")
    common(p, instance=False)
    p.add_argument("--config", help="experiment config JSON")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv: list[str] | None = None) -> int:
    level = os.environ.get("BACKNET_LOG", "error").upper()
    logging.basicConfig(level=getattr(logging, level, logging.ERROR), stream=sys.stderr)
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BacknetError as exc:
        code = _exit_code(exc)
        print(f"error: {exc}", file=sys.stderr)
        sys.stdout.write(_json({"error": str(exc), "kind": type(exc).__name__, "exit_code": code}))
        return code


if __name__ == "__main__":
    sys.exit(main())
