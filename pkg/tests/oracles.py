"""Slow reference computations, independent of the package internals."""

from __future__ import annotations

import itertools
import math

import networkx as nx


def simple_paths(edges, s, t):
    """Every simple s-t path, each as a frozenset of undirected edges."""
    adj = {}
    for u, v in edges:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    out = []

    def walk(node, seen, used):
        if node == t:
            out.append(frozenset(used))
            return
        for nxt in sorted(adj.get(node, ())):
            if nxt not in seen:
                walk(nxt, seen | {nxt}, used + [frozenset((node, nxt))])

    walk(s, {s}, [])
    return out


def max_disjoint_path_set(edges, s, t):
    """Largest family of pairwise edge-disjoint s-t paths, by exhaustive search."""
    paths = simple_paths(edges, s, t)
    best = 0

    def grow(start, used, count):
        nonlocal best
        best = max(best, count)
        for k in range(start, len(paths)):
            if not (paths[k] & used):
                grow(k + 1, used | paths[k], count + 1)

    grow(0, frozenset(), 0)
    return best


def _connectivity(M, edges):
    g = nx.Graph()
    g.add_nodes_from(range(M))
    g.add_edges_from(edges)
    return nx.edge_connectivity(g)


def slow_of_optimum(problem):
    """Cheapest OF-only edge set with edge connectivity >= K (networkx check)."""
    M, K = problem.M, problem.K
    pairs = list(itertools.combinations(range(M), 2))
    best = math.inf
    for mask in range(1 << len(pairs)):
        chosen = [p for b, p in enumerate(pairs) if mask >> b & 1]
        cost = sum(problem.costs.of[p] for p in chosen)
        if cost < best and _connectivity(M, chosen) >= K:
            best = cost
    return best


def slow_original_optimum(problem):
    """Cheapest {none, OF, hybrid} assignment meeting C2-C4, checked link by link."""
    M, K = problem.M, problem.K
    pairs = list(itertools.combinations(range(M), 2))
    best = math.inf
    for states in itertools.product((0, 1, 2), repeat=len(pairs)):
        cost = 0.0
        fail = [1.0] * M
        rate = [0.0] * M
        for (i, j), s in zip(pairs, states):
            if s == 1:
                cost += problem.costs.of[i, j]
                fail[i] = fail[j] = 0.0
                rate[i] += problem.D_t
                rate[j] += problem.D_t
            elif s == 2:
                cost += problem.costs.hybrid[i, j]
                r = problem.reliability[i, j]
                fail[i] *= 1 - r
                fail[j] *= 1 - r
                rate[i] += problem.rate[i, j]
                rate[j] += problem.rate[i, j]
        if cost >= best:
            continue
        if any(1 - f < problem.alpha - 1e-9 for f in fail):
            continue
        if any(r < problem.D_t - 1e-9 for r in rate):
            continue
        used = [p for p, s in zip(pairs, states) if s]
        if _connectivity(M, used) >= K:
            best = cost
    return best
