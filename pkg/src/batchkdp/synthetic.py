"""Seeded synthetic graphs for desk-scale experiments and tests."""

from __future__ import annotations

import numpy as np

from .graph import Graph

__all__ = ["gnp_graph", "powerlaw_graph", "random_dag"]


def gnp_graph(
    n: int, p: float, seed: int, *, undirected: bool = False
) -> Graph:
    """Directed Erdős–Rényi graph: every ordered pair is an edge with
    probability ``p``.
    """
    if n < 2 or p <= 0:
        return Graph.from_edges(max(n, 0), [])
    rng = np.random.default_rng(seed)
    pairs = n * (n - 1)
    m = int(rng.binomial(pairs, min(p, 1.0)))
    # index i encodes u = i // (n - 1) and the u-th skipped column
    picks = rng.choice(pairs, size=m, replace=False)
    u = picks // (n - 1)
    r = picks % (n - 1)
    v = r + (r >= u)
    return Graph.from_edges(
        n, np.stack([u, v], axis=1).tolist(), undirected=undirected
    )


def powerlaw_graph(
    n: int, m: int, seed: int, *, exponent: float = 2.5
) -> Graph:
    """Directed expected-degree graph with power-law degree weights.

    Endpoints of ``m`` edges are drawn independently, sources and targets
    each in proportion to a shuffled weight ``(i + 1) ** (-1 / (exponent -
    1))``. Self-loops and repeated draws are dropped, so the graph has
    somewhat fewer than ``m`` edges.
    """
    if exponent <= 1:
        raise ValueError(f"exponent must exceed 1, got {exponent}")
    if n < 2 or m < 1:
        return Graph.from_edges(max(n, 0), [])
    rng = np.random.default_rng(seed)
    weights = np.arange(1, n + 1, dtype=np.float64) ** (-1 / (exponent - 1))
    weights /= weights.sum()
    out_w = weights[rng.permutation(n)]
    in_w = weights[rng.permutation(n)]
    src = rng.choice(n, size=m, p=out_w)
    dst = rng.choice(n, size=m, p=in_w)
    return Graph.from_edges(n, np.stack([src, dst], axis=1).tolist())


def random_dag(n: int, p: float, seed: int) -> Graph:
    """Random DAG: each pair of a random vertex order gets a forward edge
    with probability ``p``.
    """
    if n < 2:
        return Graph.from_edges(max(n, 0), [])
    rng = np.random.default_rng(seed)
    mask = np.triu(rng.random((n, n)) < p, k=1)
    order = rng.permutation(n)
    u, v = np.nonzero(mask)
    return Graph.from_edges(
        n, np.stack([order[u], order[v]], axis=1).tolist()
    )
