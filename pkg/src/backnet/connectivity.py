"""Edge-disjoint path counting by unit-capacity max flow (Menger)."""

from __future__ import annotations

from collections import deque

import numpy as np


def _neighbours(adj: np.ndarray) -> list[list[int]]:
    return [np.flatnonzero(row).tolist() for row in adj]


def max_edge_disjoint_paths(
    adj: np.ndarray, source: int, sink: int, limit: int | None = None
) -> int:
    """Maximum number of pairwise edge-disjoint ``source``-``sink`` paths.

    ``adj`` is a symmetric boolean/0-1 adjacency matrix of an undirected
    graph. Each undirected edge becomes two opposite arcs of capacity one,
    and augmenting paths are found by BFS on the residual graph. When
    ``limit`` is given the search stops as soon as that many paths exist.
    """
    if source == sink:
        raise ValueError("source and sink must differ")
    adj = np.asarray(adj, dtype=bool)
    nbrs = _neighbours(adj)
    # residual[u][v] = remaining capacity of arc u->v
    residual = [dict.fromkeys(vs, 1) for vs in nbrs]
    flow = 0
    cap = limit if limit is not None else len(nbrs[source])
    while flow < cap:
        parent = {source: source}
        queue = deque([source])
        while queue and sink not in parent:
            u = queue.popleft()
            for v, c in residual[u].items():
                if c > 0 and v not in parent:
                    parent[v] = u
                    queue.append(v)
        if sink not in parent:
            break
        v = sink
        while v != source:
            u = parent[v]
            residual[u][v] -= 1
            residual[v][u] += 1
            v = u
        flow += 1
    return flow


def edge_connectivity(adj: np.ndarray, limit: int | None = None) -> int:
    """Minimum over all station pairs of the edge-disjoint path count.

    Every global min cut separates station 0 from some other station, so
    the minimum over pairs (0, t) equals the minimum over all pairs.
    With ``limit`` the answer is capped at ``limit``.
    """
    adj = np.asarray(adj, dtype=bool)
    m = adj.shape[0]
    if m < 2:
        raise ValueError("need at least two stations")
    degrees = adj.sum(axis=1)
    best = int(degrees.min())
    if limit is not None:
        best = min(best, limit)
    if best == 0:
        return 0
    if not _is_connected(adj):
        return 0
    for t in range(1, m):
        best = min(best, max_edge_disjoint_paths(adj, 0, t, limit=best))
        if best == 0:
            break
    return best


def _is_connected(adj: np.ndarray) -> bool:
    m = adj.shape[0]
    seen = np.zeros(m, dtype=bool)
    seen[0] = True
    stack = [0]
    while stack:
        u = stack.pop()
        for v in np.flatnonzero(adj[u] & ~seen):
            seen[v] = True
            stack.append(int(v))
    return bool(seen.all())
