"""JSON documents for problem instances and plans."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from backnet.errors import InvalidInputError
from backnet.model import BaseStation, LinkModels, Plan, ProblemInstance, Topology

_MODEL_KEYS = {
    "of_cost_per_m": "of_cost_per_meter",
    "hybrid_cost": "hybrid_cost_flat",
    "d_R_m": "d_R",
    "d_D_m": "d_D",
    "lambda_R_m": "lambda_R",
    "lambda_D_m": "lambda_D",
    "reliability_plateau": "reliability_plateau",
}


def models_to_dict(models: LinkModels) -> dict[str, Any]:
    return {key: getattr(models, attr) for key, attr in _MODEL_KEYS.items()}


def models_from_dict(doc: dict[str, Any]) -> LinkModels:
    unknown = set(doc) - set(_MODEL_KEYS)
    if unknown:
        raise InvalidInputError(f"unknown model keys: {sorted(unknown)}")
    kwargs = {}
    for key, attr in _MODEL_KEYS.items():
        if key in doc:
            kwargs[attr] = doc[key] if attr == "reliability_plateau" else float(doc[key])
    return LinkModels(**kwargs)


def instance_to_dict(problem: ProblemInstance) -> dict[str, Any]:
    return {
        "stations": [{"id": s.id, "x_m": s.x, "y_m": s.y} for s in problem.topology.stations],
        "K": problem.K,
        "alpha": problem.alpha,
        "D_t": problem.D_t,
        "models": models_to_dict(problem.models),
    }


def instance_from_dict(doc: dict[str, Any]) -> ProblemInstance:
    try:
        raw = sorted(doc["stations"], key=lambda s: int(s["id"]))
        stations = [BaseStation(int(s["id"]), float(s["x_m"]), float(s["y_m"])) for s in raw]
        K = doc["K"]
        if isinstance(K, bool) or not isinstance(K, int):
            raise InvalidInputError(f"K must be an integer, got {K!r}")
        return ProblemInstance(
            topology=Topology(stations),
            K=K,
            alpha=float(doc["alpha"]),
            D_t=float(doc["D_t"]),
            models=models_from_dict(doc.get("models", {})),
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InvalidInputError):
            raise
        raise InvalidInputError(f"malformed instance document: {exc!r}") from exc


def plan_to_dict(plan: Plan) -> dict[str, Any]:
    return {
        "of_links": [list(e) for e in plan.of_links()],
        "hybrid_links": [list(e) for e in plan.hybrid_links()],
    }


def plan_from_dict(doc: dict[str, Any], M: int) -> Plan:
    try:
        return Plan.from_links(M, doc.get("of_links", []), doc.get("hybrid_links", []))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InvalidInputError):
            raise
        raise InvalidInputError(f"malformed plan document: {exc!r}") from exc


def _load_json(path: str | Path) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInputError(f"cannot read {path}: {exc}") from exc


def load_instance(path: str | Path) -> ProblemInstance:
    return instance_from_dict(_load_json(path))


def load_plan(path: str | Path, M: int) -> Plan:
    return plan_from_dict(_load_json(path), M)
