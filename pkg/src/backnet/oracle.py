"""Exhaustive reference solvers for small instances.

Assignments are enumerated over a canonical edge order ((0,1), (0,2), ...,
(M-2,M-1)). Cheap necessary conditions (degree, reliability, rate) are
vectorised over the whole enumeration; the survivors are visited in
(cost in cents, encoding) order and the first one whose edge connectivity
reaches K is the optimum. Visiting in cost order is the pruning: nothing
dearer than the first feasible candidate is ever connectivity-checked.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from backnet import connectivity
from backnet.errors import CapExceededError, InfeasibleError
from backnet.model import TOL, Plan, ProblemInstance, min_path_diversity, node_rate, node_reliability

ORIGINAL_CAP = 5
OF_CAP = 6
REDUNDANCY_CAP = 5


@dataclass(frozen=True)
class OracleResult:
    plan: Plan | None
    cost: float
    explored: int
    feasible_found: bool


def _edges(M: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(M), 2))


def _enumerate(n_edges: int, n_states: int) -> np.ndarray:
    """Every state vector, row ``r`` being ``r`` written in base ``n_states``
    with the first edge as most significant digit."""
    codes = np.arange(n_states**n_edges, dtype=np.int64)
    digits = np.empty((codes.size, n_edges), dtype=np.int8)
    for e in range(n_edges - 1, -1, -1):
        digits[:, e] = codes % n_states
        codes //= n_states
    return digits


def _incidence(M: int, edges: list[tuple[int, int]]) -> np.ndarray:
    inc = np.zeros((M, len(edges)), dtype=bool)
    for e, (i, j) in enumerate(edges):
        inc[i, e] = inc[j, e] = True
    return inc


def _first_connected(
    states: np.ndarray, costs: np.ndarray, M: int, K: int, edges: list[tuple[int, int]]
) -> int | None:
    cents = np.rint(costs * 100).astype(np.int64)
    order = np.lexsort((np.arange(len(cents)), cents))
    rows, cols = np.array(edges).T if edges else (np.array([], int), np.array([], int))
    for r in order:
        adj = np.zeros((M, M), dtype=bool)
        on = states[r] != 0
        adj[rows[on], cols[on]] = True
        adj |= adj.T
        if connectivity.edge_connectivity(adj, limit=K) >= K:
            return int(r)
    return None


def _to_plan(M: int, edges: list[tuple[int, int]], row: np.ndarray) -> Plan:
    of = [e for e, s in zip(edges, row) if s == 1]
    hy = [e for e, s in zip(edges, row) if s == 2]
    return Plan.from_links(M, of, hy)


def brute_force_original(problem: ProblemInstance, cap: int = ORIGINAL_CAP) -> OracleResult:
    """Cheapest plan over every {none, OF, hybrid} assignment of all pairs."""
    M, K = problem.M, problem.K
    if M > cap:
        raise CapExceededError(f"M={M} exceeds the exhaustive cap of {cap}")
    edges = _edges(M)
    states = _enumerate(len(edges), 3)
    explored = len(states)
    ii, jj = np.array(edges).T
    of_c, hy_c = problem.costs.of[ii, jj], problem.costs.hybrid[ii, jj]
    rel, rate = problem.reliability[ii, jj], problem.rate[ii, jj]
    is_of, is_hy = states == 1, states == 2
    inc = _incidence(M, edges)

    keep = np.ones(len(states), dtype=bool)
    link_fail = np.where(is_of, 0.0, np.where(is_hy, 1.0 - rel, 1.0))
    link_rate = is_of * problem.D_t + is_hy * rate
    on = states != 0
    for i in range(M):
        keep &= on[:, inc[i]].sum(axis=1) >= K
        keep &= 1.0 - np.prod(link_fail[:, inc[i]], axis=1) >= problem.alpha - TOL
        keep &= link_rate[:, inc[i]].sum(axis=1) >= problem.D_t - TOL
    idx = np.flatnonzero(keep)
    costs = (is_of[idx] * of_c + is_hy[idx] * hy_c).sum(axis=1)
    r = _first_connected(states[idx], costs, M, K, edges)
    if r is None:
        raise InfeasibleError("no assignment satisfies every constraint")
    plan = _to_plan(M, edges, states[idx[r]])
    return OracleResult(plan, float(costs[r]), explored, True)


def brute_force_of(problem: ProblemInstance, cap: int = OF_CAP) -> OracleResult:
    """Cheapest OF-only edge subset with K link-disjoint paths everywhere."""
    M, K = problem.M, problem.K
    if M > cap:
        raise CapExceededError(f"M={M} exceeds the exhaustive cap of {cap}")
    edges = _edges(M)
    states = _enumerate(len(edges), 2)
    explored = len(states)
    ii, jj = np.array(edges).T
    of_c = problem.costs.of[ii, jj]
    inc = _incidence(M, edges)
    on = states.astype(bool)
    keep = np.ones(len(states), dtype=bool)
    for i in range(M):
        keep &= on[:, inc[i]].sum(axis=1) >= K
    idx = np.flatnonzero(keep)
    costs = (on[idx] * of_c).sum(axis=1)
    r = _first_connected(states[idx], costs, M, K, edges)
    if r is None:
        return OracleResult(None, float("inf"), explored, False)
    return OracleResult(_to_plan(M, edges, states[idx[r]]), float(costs[r]), explored, True)


def redundancy_check(problem: ProblemInstance, cap: int = REDUNDANCY_CAP) -> bool:
    """True when every OF-only plan with K link-disjoint paths also meets
    the per-node reliability and rate targets."""
    M, K = problem.M, problem.K
    if M > cap:
        raise CapExceededError(f"M={M} exceeds the exhaustive cap of {cap}")
    edges = _edges(M)
    for row in _enumerate(len(edges), 2):
        plan = _to_plan(M, edges, row)
        if min_path_diversity(plan) < K:
            continue
        for i in range(M):
            if node_reliability(plan, problem, i) < problem.alpha - TOL:
                return False
            if node_rate(plan, problem, i) < problem.D_t - TOL:
                return False
    return True
