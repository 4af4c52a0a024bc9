"""Single-query flow-augmenting baseline on explicit split-graphs."""

from __future__ import annotations

import time
from collections.abc import Sequence

from structlog.stdlib import BoundLogger

from ..domain import QueryResult
from ..exceptions import InternalConsistencyError
from ..graph import Graph
from ..queries import Query
from .splitgraph import build_explicit_split_graph, path_edges

__all__ = ["maxflow_single", "augment_edges", "decompose"]


def augment_edges(
    edges: set[tuple[int, int]], path: Sequence[int], g: Graph
) -> None:
    """Apply a split-space augmenting path to a path edge set in place.

    Traversing the reversal of a recorded edge cancels it; any other step
    between distinct vertices adds its edge.
    """
    for x, y in zip(path, path[1:]):
        u = g.proj(x)
        v = g.proj(y)
        if u == v:
            continue
        if (v, u) in edges:
            edges.discard((v, u))
        else:
            edges.add((u, v))


def decompose(
    edges: set[tuple[int, int]], s: int, t: int
) -> list[list[int]]:
    """Split a disjoint path edge set into its ``s -> t`` paths.

    Paths are ordered by first hop.
    """
    succ: dict[int, list[int]] = {}
    for u, v in edges:
        succ.setdefault(u, []).append(v)
    paths = []
    for first in sorted(succ.get(s, [])):
        path = [s, first]
        while path[-1] != t:
            nxt = succ.get(path[-1], [])
            if len(nxt) != 1 or len(path) > len(edges) + 1:
                raise InternalConsistencyError(
                    f"Path edge set of ({s}, {t}) is not a disjoint path "
                    f"union at vertex {path[-1]}"
                )
            path.append(nxt[0])
        paths.append(path)
    return paths


def maxflow_single(
    g: Graph,
    q: Query,
    k: int,
    *,
    deadline: float | None = None,
    logger: BoundLogger | None = None,
) -> QueryResult:
    """Find up to ``k`` disjoint paths for one query.

    Each iteration rebuilds the explicit split-graph of the current paths,
    searches it breadth-first for an augmenting path, and folds that path
    into the path set. The search stops early when no augmenting path
    exists or when ``deadline`` (a `time.monotonic` value) has passed.
    """
    start = time.monotonic()
    edges: set[tuple[int, int]] = set()
    paths: list[list[int]] = []
    timed_out = False
    for i in range(k):
        if deadline is not None and time.monotonic() > deadline:
            timed_out = True
            break
        sg = build_explicit_split_graph(g, paths, q.s, q.t)
        path = sg.bfs_path()
        if path is None:
            if logger is not None:
                logger.debug(
                    "No augmenting path", query=q.id, iteration=i + 1
                )
            break
        augment_edges(edges, path, g)
        paths = decompose(edges, q.s, q.t)
        # loops closed by the augmentation carry no s-t path
        edges = path_edges(paths)
        if len(paths) != i + 1:
            raise InternalConsistencyError(
                f"Query {q.id} has {len(paths)} paths after iteration {i + 1}"
            )
    return QueryResult(
        query_id=q.id,
        s=q.s,
        t=q.t,
        k=k,
        found=len(paths),
        paths=paths,
        elapsed=time.monotonic() - start,
        timed_out=timed_out,
    )
