"""Explicit split-graph of one query's current disjoint path set.

The construction follows the four textbook steps: start from the graph,
reverse every path edge, split every P-inner vertex into an in-copy and an
out-copy joined by the residual edge out-copy -> in-copy, and reattach the
remaining edges so that edges into a split vertex enter its in-copy and
edges out of it leave its out-copy. Split ids use the same encoding as
`batchkdp.graph`: a plain id is the vertex or its out-copy, ``v + n`` is
the in-copy.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from ..exceptions import UsageError
from ..graph import Graph

__all__ = ["ExplicitSplitGraph", "build_explicit_split_graph", "path_edges"]


def path_edges(paths: Iterable[Sequence[int]]) -> set[tuple[int, int]]:
    """All edges used by ``paths``."""
    return {(p[i], p[i + 1]) for p in paths for i in range(len(p) - 1)}


@dataclass
class ExplicitSplitGraph:
    """Adjacency over split ids for a single query's path set."""

    n: int

    s: int

    t: int

    pinner: frozenset[int]

    out_adj: dict[int, list[int]] = field(default_factory=dict)

    in_adj: dict[int, list[int]] = field(default_factory=dict)

    def add_edge(self, x: int, y: int) -> None:
        self.out_adj.setdefault(x, []).append(y)
        self.in_adj.setdefault(y, []).append(x)

    def finalize(self) -> None:
        for adj in (self.out_adj, self.in_adj):
            for x in adj:
                adj[x] = sorted(set(adj[x]))

    def has_vertex(self, x: int) -> bool:
        """Whether split id ``x`` exists in this split-graph."""
        if x < self.n:
            return True
        return x - self.n in self.pinner

    def out_neighbors(self, x: int) -> list[int]:
        return self.out_adj.get(x, [])

    def in_neighbors(self, x: int) -> list[int]:
        return self.in_adj.get(x, [])

    def edges(self) -> list[tuple[int, int]]:
        return sorted((x, y) for x, ys in self.out_adj.items() for y in ys)

    def bfs_path(self) -> list[int] | None:
        """Shortest ``s -> t`` split path, ties broken by ascending id."""
        parent: dict[int, int] = {self.s: self.s}
        frontier: deque[int] = deque([self.s])
        while frontier:
            x = frontier.popleft()
            for y in self.out_neighbors(x):
                if y in parent:
                    continue
                parent[y] = x
                if y == self.t:
                    path = [y]
                    while path[-1] != self.s:
                        path.append(parent[path[-1]])
                    path.reverse()
                    return path
                frontier.append(y)
        return None


def _check_disjoint(
    g: Graph, paths: Sequence[Sequence[int]], s: int, t: int
) -> None:
    seen: set[int] = set()
    for p in paths:
        if len(p) < 2 or p[0] != s or p[-1] != t:
            raise UsageError(f"Path {list(p)} does not join {s} and {t}")
        for u, v in zip(p, p[1:]):
            if not g.has_edge(u, v):
                raise UsageError(f"Path {list(p)} uses missing edge {u}->{v}")
        inner = p[1:-1]
        if len(set(inner)) != len(inner) or s in inner or t in inner:
            raise UsageError(f"Path {list(p)} is not simple")
        shared = seen.intersection(inner)
        if shared:
            raise UsageError(
                f"Paths share inner vertices {sorted(shared)}; not disjoint"
            )
        seen.update(inner)


def build_explicit_split_graph(
    g: Graph, P: Sequence[Sequence[int]], s: int, t: int
) -> ExplicitSplitGraph:
    """Construct the split-graph of ``g`` with respect to paths ``P``.

    Raises
    ------
    batchkdp.exceptions.UsageError
        If the paths are not pairwise disjoint simple ``s -> t`` paths.
    """
    _check_disjoint(g, P, s, t)
    n = g.n
    pinner = frozenset(v for p in P for v in p[1:-1])
    on_path = path_edges(P)
    sg = ExplicitSplitGraph(n=n, s=s, t=t, pinner=pinner)

    def entry(v: int) -> int:
        return v + n if v in pinner else v

    for u, v in g.edges():
        if (u, v) in on_path:
            # reversed: from v's in-copy (or t) back to u's out-copy (or s)
            sg.add_edge(entry(v), u)
        else:
            sg.add_edge(u, entry(v))
    for v in pinner:
        sg.add_edge(v, v + n)
    sg.finalize()
    return sg
