"""Tasks that answer queries inside a worker process."""

from __future__ import annotations

import time

from structlog.stdlib import BoundLogger

from ...domain import Engine, QueryResult
from ...engines.maxflow import maxflow_single
from ...engines.sharding import ShardOutcome, run_shard
from ...exceptions import UsageError
from ...graph import Graph
from ...oracles import oracle_query
from ...queries import Batch, Query
from ..main import context


def run_query(
    g: Graph,
    engine: Engine,
    q: Query,
    k: int,
    timeout: float | None,
    logger: BoundLogger | None = None,
) -> QueryResult:
    """Answer one query with an independent engine.

    The time limit starts when the query does.
    """
    deadline = None if timeout is None else time.monotonic() + timeout
    if engine == Engine.maxflow:
        return maxflow_single(g, q, k, deadline=deadline, logger=logger)
    if engine == Engine.oracle:
        return oracle_query(g, q, k, deadline=deadline)
    raise UsageError(f"{engine.value} does not answer queries one by one")


def solve_query(
    engine: Engine, q: Query, k: int, timeout: float | None
) -> QueryResult:
    """Answer one query against the worker's graph."""
    logger = context["logger"].bind(task="solve_query", query=q.id)
    result = run_query(context["graph"], engine, q, k, timeout, logger)
    if result.timed_out:
        logger.info("Query timed out", found=result.found)
    return result


def solve_shard(batch: Batch, timeout: float | None) -> ShardOutcome:
    """Run the shared engine on a shard against the worker's graph."""
    logger = context["logger"].bind(task="solve_shard", queries=len(batch))
    logger.debug("Starting shard")
    outcome = run_shard(
        context["graph"], batch, timeout=timeout, logger=logger
    )
    logger.debug("Finished shard")
    return outcome
