"""Optical-fibre-only planning by repeated forbidden-edge cluster merging.

Each round starts from singleton clusters and repeatedly joins the two
clusters connected by the cheapest link not used in any earlier round.
The links added by one round therefore span the stations on their own,
and stacking ``k`` such rounds gives ``k`` link-disjoint paths between
every pair of stations.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field

import numpy as np

from backnet.errors import InfeasibleAugmentationError, InfeasibleError, InternalConsistencyError
from backnet.model import LinkCosts, Plan, ProblemInstance, min_path_diversity

log = logging.getLogger(__name__)


class _Unavailable:
    """Cost of a prohibited link; compares greater than every number."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "UNAVAILABLE"

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self


UNAVAILABLE = _Unavailable()


class DisjointSet:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # smaller root wins so block labels stay deterministic
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra

    def blocks(self) -> list[tuple[int, ...]]:
        groups: dict[int, list[int]] = {}
        for x in range(len(self.parent)):
            groups.setdefault(self.find(x), []).append(x)
        return sorted(tuple(g) for g in groups.values())


@dataclass
class ClusterState:
    partition: DisjointSet
    forbidden: set[tuple[int, int]] = field(default_factory=set)

    @classmethod
    def singletons(cls, M: int, forbidden=()) -> ClusterState:
        return cls(DisjointSet(M), {(min(i, j), max(i, j)) for i, j in forbidden})

    def is_forbidden(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.forbidden


def cluster_cost(state: ClusterState, costs: LinkCosts, Z, Zp):
    """Cheapest allowed link between clusters ``Z`` and ``Zp``.

    Returns ``(cost, (i, j))`` with ``i < j``; ties go to the smallest pair.
    When every cross pair is forbidden returns ``(UNAVAILABLE, None)``.
    """
    best = (UNAVAILABLE, None)
    for b in Z:
        for bp in Zp:
            if b == bp:
                raise ValueError("clusters must be disjoint")
            if state.is_forbidden(b, bp):
                continue
            pair = (min(b, bp), max(b, bp))
            c = float(costs.of[pair])
            if best[0] is UNAVAILABLE or (c, pair) < (best[0], best[1]):
                best = (c, pair)
    return best


@dataclass(frozen=True)
class RoundResult:
    plan: Plan
    added: tuple[tuple[int, int], ...]
    free_merges: int


def _augment(prev: Plan, costs: LinkCosts) -> RoundResult:
    if prev.Y.any():
        raise ValueError("augmentation expects an OF-only plan")
    M = prev.M
    used = prev.of_links()
    if len(used) == M * (M - 1) // 2:
        raise InfeasibleAugmentationError("every station pair already carries a link")
    state = ClusterState.singletons(M, used)
    X = prev.X.copy()
    added: list[tuple[int, int]] = []
    free_merges = 0
    while True:
        blocks = state.partition.blocks()
        if len(blocks) == 1:
            break
        best = (UNAVAILABLE, None)
        for Z, Zp in itertools.combinations(blocks, 2):
            c, pair = cluster_cost(state, costs, Z, Zp)
            if c is not UNAVAILABLE and (best[0] is UNAVAILABLE or (c, pair) < best):
                best = (c, pair)
        if best[0] is UNAVAILABLE:
            # Every cross-cluster pair is already linked, so those old links
            # join the clusters; no new link is needed to finish the round.
            for Z in blocks[1:]:
                state.partition.union(blocks[0][0], Z[0])
            free_merges += len(blocks) - 1
            break
        i, j = best[1]
        X[i, j] = X[j, i] = 1
        state.forbidden.add((i, j))
        state.partition.union(i, j)
        added.append((i, j))
    result = Plan(X, prev.Y)
    before, after = min_path_diversity(prev), min_path_diversity(result)
    if after < before + 1:
        raise InternalConsistencyError(
            f"augmentation raised path diversity only from {before} to {after}"
        )
    return RoundResult(result, tuple(added), free_merges)


def augment_disjoint(prev_plan: Plan, costs: LinkCosts) -> Plan:
    """Add the cheapest set of unused OF links that span all stations."""
    return _augment(prev_plan, costs).plan


def of_planning_rounds(problem: ProblemInstance) -> list[RoundResult]:
    """Per-round results; entry ``k-1`` holds the plan after round ``k``."""
    M, K = problem.M, problem.K
    if K >= M:
        raise InfeasibleError("infeasible: K must be < M")
    costs = problem.costs
    plan = Plan.empty(M)
    rounds = []
    for k in range(1, K + 1):
        if k > 1 and min_path_diversity(plan) >= k:
            # an earlier round already closed every cut this round would
            rounds.append(RoundResult(plan, (), 0))
            continue
        r = _augment(plan, costs)
        log.debug("round %d added %d links (%d free merges)", k, len(r.added), r.free_merges)
        plan = r.plan
        rounds.append(r)
    return rounds


def of_planning(problem: ProblemInstance) -> Plan:
    return of_planning_rounds(problem)[-1].plan


def of_plan_matrix(problem: ProblemInstance) -> np.ndarray:
    """Symmetric 0/1 matrix of the OF planning."""
    return of_planning(problem).X
