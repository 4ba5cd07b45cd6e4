"""Exact one-vertex-per-station maximum weight clique in a planning graph.

Branch and bound over stations. Picking a vertex for a station fixes that
station's decision on every shared link, which filters the candidate rows
of its neighbours. Stations are branched most-constrained first, rows
cheapest first, and a branch is cut when its cost plus the cheapest still
compatible row of every open station cannot beat the incumbent.
"""

from __future__ import annotations

import itertools
import math
from typing import TYPE_CHECKING

import numpy as np

from backnet.errors import NoCliqueError

if TYPE_CHECKING:
    from backnet.hybrid_planner import PlanningGraph

_EPS = 1e-6


def max_weight_clique(graph: PlanningGraph) -> tuple[int, ...]:
    """Return global vertex ids (ordered by station) of the heaviest clique
    that holds exactly one vertex of every station.

    Raises :class:`NoCliqueError` when no such clique exists.
    """
    tables = graph.tables
    M = graph.M
    if M == 0:
        return ()
    cols = [{j: c for c, j in enumerate(t.neighbors)} for t in tables]
    shared = [[k for k in tables[i].neighbors if i in cols[k]] for i in range(M)]
    init = []
    for t in tables:
        order = np.lexsort((np.arange(len(t)), t.cost))
        init.append(order)

    best_cost = math.inf
    best_rows: dict[int, int] | None = None
    assigned: dict[int, int] = {}

    def search(cands: list[np.ndarray | None], cost: float) -> None:
        nonlocal best_cost, best_rows
        open_ = [u for u in range(M) if u not in assigned]
        if not open_:
            if cost < best_cost - _EPS:
                best_cost, best_rows = cost, dict(assigned)
            return
        mins = {}
        for u in open_:
            rows = cands[u]
            if len(rows) == 0:
                return
            mins[u] = float(tables[u].cost[rows[0]])
        bound = cost + sum(mins.values())
        if bound >= best_cost - _EPS:
            return
        u = min(open_, key=lambda s: (len(cands[s]), s))
        rest = bound - mins[u]
        t = tables[u]
        links = [(w, cols[u][w], cols[w][u]) for w in shared[u] if w not in assigned]
        for r in cands[u]:
            c = float(t.cost[r])
            if rest + c >= best_cost - _EPS:
                break
            nxt = list(cands)
            nxt[u] = None
            for w, cu, cw in links:
                rows = nxt[w]
                nxt[w] = rows[tables[w].states[rows, cw] == t.states[r, cu]]
            assigned[u] = int(r)
            search(nxt, cost + c)
            del assigned[u]

    search(list(init), 0.0)
    if best_rows is None:
        raise NoCliqueError("no compatible one-per-station selection exists")
    return tuple(int(graph.offsets[i]) + best_rows[i] for i in range(M))


def brute_force_clique(graph: PlanningGraph) -> tuple[int, ...] | None:
    """Exhaustive reference solver: try every one-per-station selection."""
    best, best_w = None, -math.inf
    for pick in itertools.product(*(graph.vertices_of(i) for i in range(graph.M))):
        if all(graph.adjacent(u, v) for u, v in itertools.combinations(pick, 2)):
            w = float(sum(graph.weights[v] for v in pick))
            if w > best_w + _EPS:
                best, best_w = pick, w
    return best
