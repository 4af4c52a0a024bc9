"""The shared batch engine: bidirectional BFS over the merged split-graph.

Each iteration finds one more disjoint path for every live query. Forward
searches from every source and backward searches from every target run
level by level; a frontier entry is a split vertex tagged with the set of
queries that reached it, so a vertex shared by many queries is expanded
once per level for all of them. Queries whose searches meet get an
augmenting path that is folded into the shared result state; queries
whose searches run dry are retired with the paths found so far.
"""

from __future__ import annotations

import time
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Literal

import structlog
from structlog.stdlib import BoundLogger

from ..domain import QueryResult
from ..exceptions import InternalConsistencyError
from ..graph import Graph
from ..mergedstate import (
    NeighborAnswer,
    ResultState,
    apply_augmenting_path,
    extract_paths,
    get_in_neighbors,
    get_out_neighbors,
    init_state,
)
from ..queries import Batch, Query, QuerySet
from .instrumentation import LevelHook, LevelStats

__all__ = [
    "SearchState",
    "forward_expand",
    "backward_expand",
    "reconstruct_path",
    "sharedp_batch",
    "IterationHook",
]

IterationHook = Callable[[int, ResultState], None]

Queue = dict[int, QuerySet]


@dataclass
class SearchState:
    """Bidirectional search structures of one iteration.

    ``pred[u, v]`` holds the queries whose forward search first reached
    ``u`` from ``v``; ``succ[u, v]`` is the backward counterpart, so ``v``
    is ``u``'s successor on the way to the target. The ``*_index`` maps
    list, per vertex, the second keys present in ``pred`` and ``succ``.
    """

    empty: QuerySet

    undone: QuerySet

    s_seen: Queue = field(default_factory=dict)

    t_seen: Queue = field(default_factory=dict)

    s_queue: Queue = field(default_factory=dict)

    s_nextqueue: Queue = field(default_factory=dict)

    t_queue: Queue = field(default_factory=dict)

    t_nextqueue: Queue = field(default_factory=dict)

    pred: dict[tuple[int, int], QuerySet] = field(default_factory=dict)

    succ: dict[tuple[int, int], QuerySet] = field(default_factory=dict)

    pred_index: dict[int, list[int]] = field(default_factory=dict)

    succ_index: dict[int, list[int]] = field(default_factory=dict)

    joint: Queue = field(default_factory=dict)

    @classmethod
    def seed(cls, batch: Batch, live: QuerySet) -> SearchState:
        """Queue and mark every live query at its source and target."""
        ss = cls(empty=batch.empty, undone=live)
        for qid in live:
            q = batch[qid]
            bit = batch.queryset((qid,))
            for table in (ss.s_queue, ss.s_seen):
                table[q.s] = table.get(q.s, ss.empty) | bit
            for table in (ss.t_queue, ss.t_seen):
                table[q.t] = table.get(q.t, ss.empty) | bit
        return ss


def _expand(
    v: int,
    answer: NeighborAnswer,
    ss: SearchState,
    seen: Queue,
    other_seen: Queue,
    links: dict[tuple[int, int], QuerySet],
    link_index: dict[int, list[int]],
    nextqueue: Queue,
    stats: LevelStats | None,
) -> None:
    empty = ss.empty
    for u, reached in answer:
        # exclude queries that visited u or already met this iteration
        D = (reached - seen.get(u, empty)) & ss.undone
        if not D:
            continue
        seen[u] = seen.get(u, empty) | D
        key = (u, v)
        prior = links.get(key)
        if prior is None:
            link_index.setdefault(u, []).append(v)
            links[key] = D
        else:
            links[key] = prior | D
        meet = D & other_seen.get(u, empty)
        unions = 2
        if meet:
            ss.joint[u] = ss.joint.get(u, empty) | meet
            ss.undone = ss.undone - meet
            unions += 1
        rest = D - meet
        if rest:
            nextqueue[u] = nextqueue.get(u, empty) | rest
            unions += 1
        if stats is not None:
            stats.words_ored += unions * D.words


def forward_expand(
    v: int,
    B: QuerySet,
    g: Graph,
    st: ResultState,
    ss: SearchState,
    stats: LevelStats | None = None,
) -> None:
    """Expand the forward frontier entry ``(v, B)``.

    Queries that already found this iteration's path are skipped.
    """
    B = B & ss.undone
    if not B:
        return
    _expand(
        v,
        get_out_neighbors(v, B, g, st),
        ss,
        ss.s_seen,
        ss.t_seen,
        ss.pred,
        ss.pred_index,
        ss.s_nextqueue,
        stats,
    )


def backward_expand(
    v: int,
    B: QuerySet,
    g: Graph,
    st: ResultState,
    ss: SearchState,
    stats: LevelStats | None = None,
) -> None:
    """Expand the backward frontier entry ``(v, B)``."""
    B = B & ss.undone
    if not B:
        return
    _expand(
        v,
        get_in_neighbors(v, B, g, st),
        ss,
        ss.t_seen,
        ss.s_seen,
        ss.succ,
        ss.succ_index,
        ss.t_nextqueue,
        stats,
    )


def _step(
    q: Query,
    u: int,
    links: dict[tuple[int, int], QuerySet],
    link_index: dict[int, list[int]],
    label: str,
) -> int:
    found = [v for v in link_index.get(u, ()) if q.id in links[(u, v)]]
    if len(found) != 1:
        raise InternalConsistencyError(
            f"Query {q.id} has {len(found)} {label} entries at split "
            f"vertex {u}"
        )
    return found[0]


def reconstruct_path(
    q: Query, ss: SearchState, joint: int | None = None
) -> list[int]:
    """Build the split-space augmenting path of a query that met.

    The path runs from the source along ``pred`` to the joint vertex and
    on along ``succ`` to the target. ``joint`` may be passed when the
    caller already knows it.

    Raises
    ------
    batchkdp.exceptions.InternalConsistencyError
        If the query has no joint vertex or a chain is broken.
    """
    if joint is None:
        joints = [u for u, qs in ss.joint.items() if q.id in qs]
        if len(joints) != 1:
            raise InternalConsistencyError(
                f"Query {q.id} has {len(joints)} joint vertices"
            )
        joint = joints[0]
    limit = len(ss.s_seen) + len(ss.t_seen) + 1

    head = [joint]
    while head[-1] != q.s:
        head.append(_step(q, head[-1], ss.pred, ss.pred_index, "pred"))
        if len(head) > limit:
            raise InternalConsistencyError(f"Query {q.id} pred chain loops")
    head.reverse()

    tail: list[int] = []
    current = joint
    while current != q.t:
        current = _step(q, current, ss.succ, ss.succ_index, "succ")
        tail.append(current)
        if len(tail) > limit:
            raise InternalConsistencyError(f"Query {q.id} succ chain loops")
    return head + tail


def _expand_level(
    direction: Literal["forward", "backward"],
    iteration: int,
    level: int,
    g: Graph,
    st: ResultState,
    ss: SearchState,
    on_level: LevelHook | None,
) -> None:
    if direction == "forward":
        queue, expand = ss.s_queue, forward_expand
    else:
        queue, expand = ss.t_queue, backward_expand
    stats: LevelStats | None = None
    if on_level is not None:
        frontier = ss.empty
        for B in queue.values():
            frontier = frontier | (B & ss.undone)
        stats = LevelStats(
            iteration=iteration,
            direction=direction,
            level=level,
            frontier=frontier,
        )
    for v in sorted(queue):
        B = queue[v]
        if stats is not None:
            live = B & ss.undone
            if live:
                size = len(live)
                stats.vertices_expanded += 1
                stats.query_expansions += size
                stats.shared_vertices += size >= 2
        expand(v, B, g, st, ss, stats)
    if direction == "forward":
        ss.s_queue, ss.s_nextqueue = ss.s_nextqueue, {}
    else:
        ss.t_queue, ss.t_nextqueue = ss.t_nextqueue, {}
    if stats is not None and on_level is not None:
        on_level(stats)


def sharedp_batch(
    g: Graph,
    batch: Batch,
    *,
    deadline: float | None = None,
    logger: BoundLogger | None = None,
    on_level: LevelHook | None = None,
    on_iteration: IterationHook | None = None,
) -> list[QueryResult]:
    """Answer every query of ``batch`` with shared traversals.

    Parameters
    ----------
    g
        The graph.
    batch
        The queries and their common ``k``.
    deadline
        Optional `time.monotonic` value; once passed, the current
        iteration is abandoned and all unfinished queries are reported
        as timed out with the paths of completed iterations.
    logger
        Logger for per-iteration debug messages.
    on_level
        Called with the counters of every expanded level.
    on_iteration
        Called with the result state after every completed iteration.

    Returns
    -------
    list of QueryResult
        One result per query, in query id order.
    """
    if logger is None:
        logger = structlog.get_logger("batchkdp")
    start = time.monotonic()
    st = init_state(batch, g)
    live = batch.all()
    finished_at = [0.0] * len(batch)
    timed_out = batch.empty

    for i in range(1, batch.k + 1):
        if not live:
            break
        ss = SearchState.seed(batch, live)
        level = 0
        while ss.undone and ss.s_queue and ss.t_queue:
            if deadline is not None and time.monotonic() > deadline:
                timed_out = live
                break
            level += 1
            _expand_level("forward", i, level, g, st, ss, on_level)
            if not ss.undone or not ss.s_queue:
                break
            _expand_level("backward", i, level, g, st, ss, on_level)
        if timed_out:
            logger.info(
                "Batch deadline passed",
                iteration=i,
                unfinished=len(timed_out),
            )
            break

        met = live - ss.undone
        joints = {qid: u for u, qs in ss.joint.items() for qid in qs}
        groups: dict[tuple[int, ...], list[int]] = {}
        for qid in met:
            path = tuple(reconstruct_path(batch[qid], ss, joints[qid]))
            groups.setdefault(path, []).append(qid)
        for path, qids in groups.items():
            apply_augmenting_path(path, batch.queryset(qids), st, batch)

        now = time.monotonic() - start
        retired = ss.undone
        for qid in retired:
            finished_at[qid] = now
        live = live - retired
        if i == batch.k:
            for qid in live:
                finished_at[qid] = now
        logger.debug(
            "Finished iteration",
            iteration=i,
            levels=level,
            found=len(met),
            distinct_paths=len(groups),
            retired=len(retired),
        )
        if on_iteration is not None:
            on_iteration(i, st)

    now = time.monotonic() - start
    for qid in timed_out:
        finished_at[qid] = now

    results = []
    for q in batch:
        paths = extract_paths(q, batch.k, st)
        results.append(
            QueryResult(
                query_id=q.id,
                s=q.s,
                t=q.t,
                k=batch.k,
                found=len(paths),
                paths=paths,
                elapsed=finished_at[q.id],
                timed_out=q.id in timed_out,
            )
        )
    return results
