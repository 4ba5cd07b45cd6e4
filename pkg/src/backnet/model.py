"""Domain types, link models and plan evaluation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from backnet import connectivity
from backnet.errors import InvalidInputError

# Absolute slack for reliability/rate threshold comparisons.
TOL = 1e-9


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class BaseStation:
    id: int
    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise InvalidInputError(f"station {self.id} has non-finite coordinates")


@dataclass(frozen=True, eq=False)
class Topology:
    """Base stations with their Euclidean distance matrix (meters)."""

    stations: tuple[BaseStation, ...]
    distance: np.ndarray = field(repr=False)

    @classmethod
    def from_positions(cls, positions: Iterable[Sequence[float]]) -> Topology:
        pts = np.asarray([tuple(map(float, p)) for p in positions], dtype=float).reshape(-1, 2)
        stations = tuple(BaseStation(i, x, y) for i, (x, y) in enumerate(pts))
        return cls(stations)

    def __init__(self, stations: Sequence[BaseStation]):
        stations = tuple(stations)
        if [s.id for s in stations] != list(range(len(stations))):
            raise InvalidInputError("station ids must be 0..M-1 in order")
        pts = np.array([(s.x, s.y) for s in stations], dtype=float).reshape(-1, 2)
        diff = pts[:, None, :] - pts[None, :, :]
        dist = np.sqrt((diff**2).sum(axis=-1))
        object.__setattr__(self, "stations", stations)
        object.__setattr__(self, "distance", _frozen(dist))

    @property
    def M(self) -> int:
        return len(self.stations)

    @property
    def positions(self) -> np.ndarray:
        return np.array([(s.x, s.y) for s in self.stations], dtype=float).reshape(-1, 2)


@dataclass(frozen=True)
class LinkModels:
    """Prices and distance curves for OF and hybrid RF/FSO links.

    ``reliability_plateau`` selects what a short hybrid link delivers:
    ``"alpha"`` (exactly the threshold) or ``"one"``.
    """

    of_cost_per_meter: float = 13.5
    hybrid_cost_flat: float = 20_000.0
    d_R: float = 2_000.0
    d_D: float = 3_000.0
    lambda_R: float = 500.0
    lambda_D: float = 500.0
    reliability_plateau: str = "alpha"

    def __post_init__(self) -> None:
        for name in ("of_cost_per_meter", "hybrid_cost_flat", "d_R", "d_D", "lambda_R", "lambda_D"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise InvalidInputError(f"{name} must be strictly positive, got {value!r}")
        if self.reliability_plateau not in ("alpha", "one"):
            raise InvalidInputError("reliability_plateau must be 'alpha' or 'one'")


class LinkCosts(NamedTuple):
    of: np.ndarray
    hybrid: np.ndarray


@dataclass(frozen=True, eq=False)
class ProblemInstance:
    topology: Topology
    K: int
    alpha: float
    D_t: float
    models: LinkModels = field(default_factory=LinkModels)

    def __post_init__(self) -> None:
        if not 0.0 <= self.alpha <= 1.0:
            raise InvalidInputError(f"alpha must lie in [0, 1], got {self.alpha}")
        if not self.D_t > 0:
            raise InvalidInputError(f"D_t must be positive, got {self.D_t}")
        if int(self.K) != self.K or self.K < 1:
            raise InvalidInputError(f"K must be a positive integer, got {self.K}")
        if self.topology.M < 2:
            raise InvalidInputError("need at least two base stations")
        # K >= M is representable but infeasible; planners reject it.

    @property
    def M(self) -> int:
        return self.topology.M

    @cached_property
    def costs(self) -> LinkCosts:
        return link_costs(self.topology, self.models)

    @cached_property
    def reliability(self) -> np.ndarray:
        """Hybrid link reliability for every station pair."""
        d = self.topology.distance
        return _frozen(np.vectorize(lambda x: hybrid_reliability(x, self.models, self.alpha))(d))

    @cached_property
    def rate(self) -> np.ndarray:
        """Hybrid link data rate for every station pair."""
        d = self.topology.distance
        return _frozen(np.vectorize(lambda x: hybrid_rate(x, self.models, self.D_t))(d))


class Plan:
    """OF (``X``) and hybrid (``Y``) link indicator matrices.

    Construction does not enforce symmetry or exclusivity so that broken
    plans can still be loaded and reported on by :func:`check_feasibility`.
    """

    __slots__ = ("X", "Y")

    def __init__(self, X: np.ndarray, Y: np.ndarray):
        X = np.array(X, dtype=np.uint8)
        Y = np.array(Y, dtype=np.uint8)
        if X.ndim != 2 or X.shape[0] != X.shape[1] or X.shape != Y.shape:
            raise InvalidInputError(f"X and Y must be equal square matrices, got {X.shape} and {Y.shape}")
        if ((X > 1) | (Y > 1)).any():
            raise InvalidInputError("plan matrices must be binary")
        self.X = _frozen(X)
        self.Y = _frozen(Y)

    @classmethod
    def empty(cls, M: int) -> Plan:
        z = np.zeros((M, M), dtype=np.uint8)
        return cls(z, z)

    @classmethod
    def from_links(
        cls,
        M: int,
        of_links: Iterable[Sequence[int]] = (),
        hybrid_links: Iterable[Sequence[int]] = (),
    ) -> Plan:
        X = np.zeros((M, M), dtype=np.uint8)
        Y = np.zeros((M, M), dtype=np.uint8)
        for mat, links in ((X, of_links), (Y, hybrid_links)):
            for i, j in links:
                i, j = int(i), int(j)
                if i == j or not (0 <= i < M and 0 <= j < M):
                    raise InvalidInputError(f"invalid link ({i}, {j}) for M={M}")
                mat[i, j] = mat[j, i] = 1
        return cls(X, Y)

    @property
    def M(self) -> int:
        return self.X.shape[0]

    @property
    def adjacency(self) -> np.ndarray:
        return (self.X | self.Y).astype(bool)

    def of_links(self) -> list[tuple[int, int]]:
        return [(int(i), int(j)) for i, j in zip(*np.nonzero(np.triu(self.X, 1)))]

    def hybrid_links(self) -> list[tuple[int, int]]:
        return [(int(i), int(j)) for i, j in zip(*np.nonzero(np.triu(self.Y, 1)))]

    def is_well_formed(self) -> bool:
        """Symmetric, mutually exclusive, zero diagonal."""
        X, Y = self.X, self.Y
        return bool(
            (X == X.T).all()
            and (Y == Y.T).all()
            and not (X & Y).any()
            and not X.diagonal().any()
            and not Y.diagonal().any()
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Plan):
            return NotImplemented
        return np.array_equal(self.X, other.X) and np.array_equal(self.Y, other.Y)

    def __hash__(self) -> int:
        return hash((self.X.tobytes(), self.Y.tobytes()))

    def __repr__(self) -> str:
        return f"Plan(M={self.M}, of={self.of_links()}, hybrid={self.hybrid_links()})"


@dataclass(frozen=True)
class FeasibilityReport:
    exclusivity: bool
    connectivity: bool
    min_diversity: int
    reliability_ok: bool
    node_reliability: tuple[float, ...]
    rate_ok: bool
    node_rate: tuple[float, ...]

    @property
    def overall(self) -> bool:
        return self.exclusivity and self.connectivity and self.reliability_ok and self.rate_ok

    def to_dict(self) -> dict:
        return {
            "overall": self.overall,
            "C1_exclusivity": self.exclusivity,
            "C2_connectivity": {"pass": self.connectivity, "min_path_diversity": self.min_diversity},
            "C3_reliability": {"pass": self.reliability_ok, "per_node": list(self.node_reliability)},
            "C4_rate": {"pass": self.rate_ok, "per_node": list(self.node_rate)},
        }


def hybrid_reliability(d: float, models: LinkModels, alpha: float) -> float:
    plateau = alpha if models.reliability_plateau == "alpha" else 1.0
    if d <= models.d_R:
        return plateau
    return plateau * math.exp(-(d - models.d_R) / models.lambda_R)


def hybrid_rate(d: float, models: LinkModels, D_t: float) -> float:
    if d <= models.d_D:
        return D_t
    return D_t * math.exp(-(d - models.d_D) / models.lambda_D)


def link_costs(topology: Topology, models: LinkModels) -> LinkCosts:
    of = models.of_cost_per_meter * topology.distance
    hybrid = np.full_like(of, models.hybrid_cost_flat)
    np.fill_diagonal(hybrid, 0.0)
    return LinkCosts(_frozen(of), _frozen(hybrid))


def path_diversity(plan: Plan, i: int, j: int) -> int:
    if i == j:
        raise InvalidInputError("path diversity is undefined for i == j")
    return connectivity.max_edge_disjoint_paths(plan.adjacency, i, j)


def min_path_diversity(plan: Plan) -> int:
    return connectivity.edge_connectivity(plan.adjacency)


def node_reliability(plan: Plan, problem: ProblemInstance, i: int) -> float:
    X = plan.X[i].astype(float)
    Y = plan.Y[i].astype(float)
    fail = np.prod((1.0 - X) * (1.0 - Y * problem.reliability[i]))
    return float(1.0 - fail)


def node_rate(plan: Plan, problem: ProblemInstance, i: int) -> float:
    return float((plan.X[i] * problem.D_t + plan.Y[i] * problem.rate[i]).sum())


def check_feasibility(plan: Plan, problem: ProblemInstance) -> FeasibilityReport:
    if plan.M != problem.M:
        raise InvalidInputError(f"plan has {plan.M} stations, instance has {problem.M}")
    rel = tuple(node_reliability(plan, problem, i) for i in range(plan.M))
    rate = tuple(node_rate(plan, problem, i) for i in range(plan.M))
    diversity = min_path_diversity(plan)
    return FeasibilityReport(
        exclusivity=plan.is_well_formed(),
        connectivity=diversity >= problem.K,
        min_diversity=diversity,
        reliability_ok=all(r >= problem.alpha - TOL for r in rel),
        node_reliability=rel,
        rate_ok=all(r >= problem.D_t - TOL for r in rate),
        node_rate=rate,
    )


def plan_cost(plan: Plan, costs: LinkCosts) -> float:
    """Total deployment cost, each undirected link counted once."""
    upper = np.triu(np.ones_like(costs.of, dtype=bool), 1)
    return float((plan.X * costs.of + plan.Y * costs.hybrid)[upper].sum())


def cents(amount: float) -> int:
    return int(round(amount * 100))
