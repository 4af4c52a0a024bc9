"""The immutable directed graph and its split-space vertex encoding.

Split space doubles the vertex id range. For a graph with ``n`` vertices a
split id ``raw < n`` denotes vertex ``raw`` itself, which is also its
out-copy once the vertex is split, and ``raw >= n`` denotes the in-copy of
vertex ``raw - n``. Every per-vertex search structure can therefore be
indexed by a flat integer in ``[0, 2n)``.
"""

from __future__ import annotations

from bisect import bisect_left
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass

import numpy as np

__all__ = ["Graph", "GraphStats", "describe"]


class Graph:
    """An immutable directed graph with sorted adjacency in both directions.

    Use `Graph.from_edges` rather than the constructor; it removes
    self-loops and duplicate edges and sorts the adjacency sequences.

    Parameters
    ----------
    out_adj
        Per-vertex ascending out-neighbor ids.
    in_adj
        Per-vertex ascending in-neighbor ids.
    """

    __slots__ = ("_n", "_out", "_in", "_m")

    def __init__(
        self,
        out_adj: Sequence[tuple[int, ...]],
        in_adj: Sequence[tuple[int, ...]],
    ) -> None:
        if len(out_adj) != len(in_adj):
            raise ValueError("out_adj and in_adj must have the same length")
        self._n = len(out_adj)
        self._out = tuple(out_adj)
        self._in = tuple(in_adj)
        self._m = sum(len(a) for a in self._out)

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]],
        *,
        undirected: bool = False,
    ) -> Graph:
        """Build a graph from ``(u, v)`` pairs over vertices ``0..n-1``.

        Self-loops and duplicate edges are dropped. With ``undirected``
        every edge is inserted in both directions.
        """
        arr = np.array(list(edges), dtype=np.int64).reshape(-1, 2)
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            raise ValueError(f"edge endpoint outside [0, {n})")
        arr = arr[arr[:, 0] != arr[:, 1]]
        if undirected:
            arr = np.concatenate([arr, arr[:, ::-1]])
        if arr.size:
            # lexicographic (u, v) order
            arr = np.unique(arr, axis=0)
        src = arr[:, 0]
        dst = arr[:, 1]

        out_counts = np.bincount(src, minlength=n)
        out_split = np.cumsum(out_counts)[:-1] if n else []
        out_adj = [tuple(a.tolist()) for a in np.split(dst, out_split)]

        by_target = np.lexsort((src, dst))
        in_counts = np.bincount(dst, minlength=n)
        in_split = np.cumsum(in_counts)[:-1] if n else []
        in_adj = [
            tuple(a.tolist()) for a in np.split(src[by_target], in_split)
        ]
        if n == 0:
            out_adj, in_adj = [], []
        return cls(out_adj, in_adj)

    @property
    def n(self) -> int:
        """Number of vertices."""
        return self._n

    @property
    def num_edges(self) -> int:
        """Number of directed edges."""
        return self._m

    def out_neighbors(self, v: int) -> tuple[int, ...]:
        """Ascending out-neighbors of ``v``."""
        return self._out[v]

    def in_neighbors(self, v: int) -> tuple[int, ...]:
        """Ascending in-neighbors of ``v``."""
        return self._in[v]

    def out_degree(self, v: int) -> int:
        return len(self._out[v])

    def in_degree(self, v: int) -> int:
        return len(self._in[v])

    def has_edge(self, u: int, v: int) -> bool:
        if not (0 <= u < self._n):
            return False
        adj = self._out[u]
        i = bisect_left(adj, v)
        return i < len(adj) and adj[i] == v

    def edges(self) -> Iterator[tuple[int, int]]:
        """Iterate over edges in ascending ``(u, v)`` order."""
        for u, adj in enumerate(self._out):
            for v in adj:
                yield u, v

    def without_edge(self, u: int, v: int) -> Graph:
        """Return a copy of the graph with edge ``u -> v`` removed."""
        return Graph.from_edges(
            self._n, (e for e in self.edges() if e != (u, v))
        )

    # Split-space encoding

    def in_copy(self, v: int) -> int:
        """Split id of the in-copy of original vertex ``v``."""
        return v + self._n

    def is_in_copy(self, raw: int) -> bool:
        return raw >= self._n

    def proj(self, raw: int) -> int:
        """Project a split id back to its original vertex."""
        return raw % self._n if self._n else raw

    def format_split(self, raw: int) -> str:
        """Render a split id as ``v`` or ``v_in`` for messages."""
        if raw >= self._n:
            return f"{raw - self._n}_in"
        return str(raw)

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, m={self._m})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._out == other._out

    def __hash__(self) -> int:
        return hash(self._out)


@dataclass(frozen=True)
class GraphStats:
    """Summary statistics of a graph."""

    n: int

    m: int

    max_out_degree: int

    max_in_degree: int

    mean_degree: float


def describe(g: Graph) -> GraphStats:
    """Compute summary statistics for ``g``."""
    out_deg = [g.out_degree(v) for v in range(g.n)]
    in_deg = [g.in_degree(v) for v in range(g.n)]
    return GraphStats(
        n=g.n,
        m=g.num_edges,
        max_out_degree=max(out_deg, default=0),
        max_in_degree=max(in_deg, default=0),
        mean_degree=g.num_edges / g.n if g.n else 0.0,
    )
