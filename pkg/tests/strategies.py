"""Hypothesis strategies for graphs, queries, and result states."""

from __future__ import annotations

from hypothesis import strategies as st

from batchkdp.graph import Graph
from batchkdp.queries import Batch


@st.composite
def graphs(
    draw: st.DrawFn, min_n: int = 2, max_n: int = 12, max_p: float = 0.5
) -> Graph:
    """Random directed graphs with edge density up to ``max_p``."""
    n = draw(st.integers(min_n, max_n))
    p = draw(st.sampled_from([0.05, 0.15, 0.3, max_p]))
    edges = []
    for u in range(n):
        for v in range(n):
            if u != v and draw(st.floats(0, 1)) < p:
                edges.append((u, v))
    return Graph.from_edges(n, edges)


@st.composite
def graphs_and_batches(
    draw: st.DrawFn,
    max_n: int = 12,
    max_queries: int = 6,
    max_k: int = 4,
) -> tuple[Graph, Batch]:
    """A random graph with a batch of queries over its vertices."""
    g = draw(graphs(max_n=max_n))
    pair = st.tuples(
        st.integers(0, g.n - 1), st.integers(0, g.n - 1)
    ).filter(lambda p: p[0] != p[1])
    pairs = draw(st.lists(pair, min_size=1, max_size=max_queries))
    k = draw(st.integers(1, max_k))
    return g, Batch.from_pairs(pairs, k)
