"""Shard-parallel execution of the shared engine.

A batch is dealt into sub-batches that each get their own result state.
Sharing only happens inside a shard, so every query's outcome matches a
run of its shard alone.
"""

from __future__ import annotations

import time
from collections.abc import Sequence

from structlog.stdlib import BoundLogger

from ..domain import QueryResult
from ..exceptions import InternalConsistencyError
from ..graph import Graph
from ..queries import Batch
from .instrumentation import TraversalStats
from .sharedp import sharedp_batch

__all__ = [
    "ShardOutcome",
    "batch_deadline",
    "run_shard",
    "merge_shard_results",
    "sharedp_sharded",
]

ShardOutcome = tuple[list[QueryResult], TraversalStats]


def batch_deadline(timeout: float | None, size: int) -> float | None:
    """Wall-clock deadline granting ``timeout`` seconds per query."""
    if timeout is None:
        return None
    return time.monotonic() + timeout * size


def run_shard(
    g: Graph,
    batch: Batch,
    *,
    timeout: float | None = None,
    logger: BoundLogger | None = None,
) -> ShardOutcome:
    """Run the shared engine on one (sub-)batch, recording level counters.

    The time budget is ``timeout`` times the shard's size, counted from
    the call.
    """
    stats = TraversalStats()
    results = sharedp_batch(
        g,
        batch,
        deadline=batch_deadline(timeout, len(batch)),
        logger=logger,
        on_level=stats.record,
    )
    return results, stats


def merge_shard_results(
    batch: Batch,
    parts: Sequence[tuple[Batch, list[int]]],
    outcomes: Sequence[ShardOutcome],
) -> ShardOutcome:
    """Map shard results back to the original query ids.

    Returns the results in original id order along with the level counters
    of all shards.
    """
    merged: dict[int, QueryResult] = {}
    stats = TraversalStats()
    for (_, ids), (results, shard_stats) in zip(parts, outcomes):
        for result in results:
            original = ids[result.query_id]
            merged[original] = result.copy(update={"query_id": original})
        stats.levels.extend(shard_stats.levels)
    if len(merged) != len(batch):
        raise InternalConsistencyError(
            f"Shards returned {len(merged)} results for {len(batch)} queries"
        )
    return [merged[i] for i in range(len(batch))], stats


def sharedp_sharded(
    g: Graph,
    batch: Batch,
    shards: int,
    *,
    timeout: float | None = None,
    logger: BoundLogger | None = None,
) -> ShardOutcome:
    """Run each shard of ``batch`` in turn in this process."""
    parts = batch.partition(shards)
    outcomes = [
        run_shard(g, sub, timeout=timeout, logger=logger) for sub, _ in parts
    ]
    return merge_shard_results(batch, parts, outcomes)
