"""Hybrid RF/FSO planning through a planning graph and max-weight clique.

Pipeline: OF planning -> neighbour sets -> per-station link combinations
-> planning graph -> one-vertex-per-station maximum weight clique -> plan.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from enum import IntEnum
from typing import Iterator, Sequence

import numpy as np

from backnet.clique import max_weight_clique
from backnet.errors import CombinatorialLimitError, InternalConsistencyError
from backnet.model import TOL, LinkCosts, Plan, ProblemInstance, plan_cost
from backnet.of_planner import of_planning

log = logging.getLogger(__name__)

DEFAULT_NEIGHBOUR_CAP = 12


class LinkState(IntEnum):
    NONE = 0
    OF = 1
    HYBRID = 2


@dataclass(frozen=True)
class NeighborSets:
    sets: tuple[tuple[int, ...], ...]

    def __getitem__(self, i: int) -> tuple[int, ...]:
        return self.sets[i]

    def __len__(self) -> int:
        return len(self.sets)

    def mutual(self, i: int, k: int) -> bool:
        return k in self.sets[i] and i in self.sets[k]


@dataclass(frozen=True)
class Combination:
    station: int
    neighbors: tuple[int, ...]
    decisions: tuple[LinkState, ...]

    def state_to(self, j: int) -> LinkState:
        try:
            return self.decisions[self.neighbors.index(j)]
        except ValueError:
            return LinkState.NONE


def neighbor_sets(problem: ProblemInstance, of_plan: np.ndarray | Plan, costs: LinkCosts | None = None) -> NeighborSets:
    """Stations reachable by an OF link no dearer than the station's
    most expensive OF-planning link, symmetrised by union."""
    costs = costs or problem.costs
    Xbar = of_plan.X if isinstance(of_plan, Plan) else np.asarray(of_plan)
    M = problem.M
    radius = (Xbar * costs.of).max(axis=1)
    member = costs.of <= radius[:, None]
    np.fill_diagonal(member, False)
    member |= member.T
    member |= Xbar.astype(bool)
    return NeighborSets(tuple(tuple(int(j) for j in np.flatnonzero(member[i])) for i in range(M)))


def cost_assumption_holds(
    problem: ProblemInstance, neighbors: NeighborSets, costs: LinkCosts | None = None
) -> tuple[bool, list[tuple[int, int]]]:
    """Check that linking each end of a non-neighbour pair to its own nearest
    station by fibre is no dearer than one hybrid link across the pair."""
    costs = costs or problem.costs
    M = problem.M
    off = costs.of + np.diag(np.full(M, np.inf))
    nearest = off.min(axis=1)
    violating = [
        (i, j)
        for i, j in itertools.combinations(range(M), 2)
        if not neighbors.mutual(i, j) and nearest[i] + nearest[j] > costs.hybrid[i, j]
    ]
    return not violating, violating


@dataclass(frozen=True)
class CombinationTable:
    """All admissible combinations of one station, as arrays.

    ``states[r, c]`` is the :class:`LinkState` of row ``r`` towards
    ``neighbors[c]``; ``cost[r]`` is the full cost of the row's links.
    """

    station: int
    neighbors: tuple[int, ...]
    states: np.ndarray
    cost: np.ndarray

    def __len__(self) -> int:
        return len(self.cost)

    def combinations(self) -> list[Combination]:
        return [
            Combination(self.station, self.neighbors, tuple(LinkState(int(s)) for s in row))
            for row in self.states
        ]

    @classmethod
    def from_combinations(cls, station: int, combos: Sequence[Combination], costs: LinkCosts) -> CombinationTable:
        if not combos:
            raise ValueError(f"station {station} has no combinations")
        neighbors = combos[0].neighbors
        states = np.array([[int(s) for s in c.decisions] for c in combos], dtype=np.int8)
        states = states.reshape(len(combos), len(neighbors))
        return cls(station, neighbors, states, _row_costs(station, neighbors, states, costs))


def _row_costs(i: int, nbrs: Sequence[int], states: np.ndarray, costs: LinkCosts) -> np.ndarray:
    idx = list(nbrs)
    of = costs.of[i, idx]
    hy = costs.hybrid[i, idx]
    return ((states == LinkState.OF) * of + (states == LinkState.HYBRID) * hy).sum(axis=1)


def combination_table(
    problem: ProblemInstance,
    i: int,
    neighbors: NeighborSets,
    of_plan: np.ndarray | Plan,
    costs: LinkCosts | None = None,
    cap: int = DEFAULT_NEIGHBOUR_CAP,
) -> CombinationTable:
    costs = costs or problem.costs
    Xbar = of_plan.X if isinstance(of_plan, Plan) else np.asarray(of_plan)
    nbrs = neighbors[i]
    n = len(nbrs)
    if n > cap:
        raise CombinatorialLimitError(f"station {i} has {n} neighbours, cap is {cap}")
    # itertools.product order, i.e. lexicographic on the state tuple
    states = np.array(list(itertools.product((0, 1, 2), repeat=n)), dtype=np.int8).reshape(3**n, n)
    idx = list(nbrs)
    forced = Xbar[i, idx].astype(bool)
    is_of = states == LinkState.OF
    is_hy = states == LinkState.HYBRID
    keep = ~((states == LinkState.NONE) & forced).any(axis=1)
    fail = np.prod(np.where(is_of, 0.0, np.where(is_hy, 1.0 - problem.reliability[i, idx], 1.0)), axis=1)
    keep &= 1.0 - fail >= problem.alpha - TOL
    rate = (is_of * problem.D_t + is_hy * problem.rate[i, idx]).sum(axis=1)
    keep &= rate >= problem.D_t - TOL
    states = states[keep]
    return CombinationTable(i, tuple(nbrs), states, _row_costs(i, nbrs, states, costs))


def enumerate_combinations(
    problem: ProblemInstance,
    i: int,
    neighbors: NeighborSets,
    of_plan: np.ndarray | Plan,
    costs: LinkCosts | None = None,
    cap: int = DEFAULT_NEIGHBOUR_CAP,
) -> list[Combination]:
    """Every link-state assignment over ``N_i`` that covers the station's
    OF-planning links and meets its reliability and rate targets."""
    return combination_table(problem, i, neighbors, of_plan, costs, cap).combinations()


class PlanningGraph:
    """M-partite compatibility graph over per-station combinations.

    Vertex ``v`` belongs to station ``station_of[v]`` and is row
    ``row_of[v]`` of that station's table. Adjacency is evaluated by rule
    rather than stored, since the edge count grows with the product of the
    table sizes.
    """

    def __init__(self, tables: Sequence[CombinationTable]):
        self.tables = tuple(tables)
        self.M = len(self.tables)
        offsets = np.cumsum([0] + [len(t) for t in self.tables])
        self.offsets = offsets
        self.station_of = np.repeat(np.arange(self.M), [len(t) for t in self.tables])
        self.row_of = np.concatenate([np.arange(len(t)) for t in self.tables]) if self.M else np.array([], int)
        self.weights = np.concatenate([-0.5 * t.cost for t in self.tables]) if self.M else np.array([])
        self._col = [{j: c for c, j in enumerate(t.neighbors)} for t in self.tables]

    @property
    def n_vertices(self) -> int:
        return int(self.offsets[-1])

    def vertices_of(self, i: int) -> range:
        return range(int(self.offsets[i]), int(self.offsets[i + 1]))

    def shares_link(self, i: int, k: int) -> bool:
        return k in self._col[i] and i in self._col[k]

    def state(self, v: int, j: int) -> int:
        i = int(self.station_of[v])
        c = self._col[i].get(j)
        return 0 if c is None else int(self.tables[i].states[self.row_of[v], c])

    def combination(self, v: int) -> Combination:
        t = self.tables[int(self.station_of[v])]
        row = t.states[self.row_of[v]]
        return Combination(t.station, t.neighbors, tuple(LinkState(int(s)) for s in row))

    def adjacent(self, u: int, v: int) -> bool:
        i, k = int(self.station_of[u]), int(self.station_of[v])
        if i == k:
            return False
        if not self.shares_link(i, k):
            return True
        return self.state(u, k) == self.state(v, i)

    def n_edges(self) -> int:
        total = 0
        for i, k in itertools.combinations(range(self.M), 2):
            ti, tk = self.tables[i], self.tables[k]
            if self.shares_link(i, k):
                si = np.bincount(ti.states[:, self._col[i][k]], minlength=3)
                sk = np.bincount(tk.states[:, self._col[k][i]], minlength=3)
                total += int((si * sk).sum())
            else:
                total += len(ti) * len(tk)
        return total

    def edges(self) -> Iterator[tuple[int, int]]:
        for u, v in itertools.combinations(range(self.n_vertices), 2):
            if self.adjacent(u, v):
                yield u, v


def build_planning_graph(
    problem: ProblemInstance,
    combinations: Sequence[Sequence[Combination]] | Sequence[CombinationTable],
    costs: LinkCosts | None = None,
) -> PlanningGraph:
    costs = costs or problem.costs
    tables = []
    for i, entry in enumerate(combinations):
        if isinstance(entry, CombinationTable):
            tables.append(entry)
        else:
            tables.append(CombinationTable.from_combinations(i, entry, costs))
    return PlanningGraph(tables)


def plan_from_clique(graph: PlanningGraph, clique: Sequence[int]) -> Plan:
    M = graph.M
    state = np.zeros((M, M), dtype=np.int8)
    seen = np.zeros((M, M), dtype=bool)
    for v in clique:
        combo = graph.combination(v)
        i = combo.station
        for j, s in zip(combo.neighbors, combo.decisions):
            a, b = min(i, j), max(i, j)
            if seen[a, b] and state[a, b] != s:
                raise InternalConsistencyError(f"clique disagrees on link ({a}, {b})")
            seen[a, b] = True
            state[a, b] = s
    state = state + state.T
    return Plan(state == LinkState.OF, state == LinkState.HYBRID)


@dataclass(frozen=True)
class HybridResult:
    plan: Plan
    of_plan: Plan
    of_plan_cost: float
    hybrid_plan_cost: float
    assumption_violated: bool
    violating_pairs: tuple[tuple[int, int], ...]
    n_vertices: int
    n_edges: int

    def metadata(self) -> dict:
        return {
            "of_plan_cost": self.of_plan_cost,
            "hybrid_plan_cost": self.hybrid_plan_cost,
            "assumption_violated": self.assumption_violated,
            "planning_graph_stats": {"vertices": self.n_vertices, "edges": self.n_edges},
        }


def solve_hybrid(problem: ProblemInstance, cap: int = DEFAULT_NEIGHBOUR_CAP) -> HybridResult:
    costs = problem.costs
    of_plan = of_planning(problem)
    nbrs = neighbor_sets(problem, of_plan, costs)
    holds, violating = cost_assumption_holds(problem, nbrs, costs)
    if not holds:
        log.info("cost assumption violated on %d pairs", len(violating))
    tables = [combination_table(problem, i, nbrs, of_plan, costs, cap) for i in range(problem.M)]
    graph = build_planning_graph(problem, tables, costs)
    plan = plan_from_clique(graph, max_weight_clique(graph))
    hybrid_cost = plan_cost(plan, costs)
    return HybridResult(
        plan=plan,
        of_plan=of_plan,
        of_plan_cost=plan_cost(of_plan, costs),
        hybrid_plan_cost=hybrid_cost,
        assumption_violated=not holds,
        violating_pairs=tuple(violating),
        n_vertices=graph.n_vertices,
        n_edges=graph.n_edges(),
    )


def hybrid_planning(problem: ProblemInstance) -> Plan:
    return solve_hybrid(problem).plan
