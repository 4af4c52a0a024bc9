"""Set-up for the process-pool workers that solve queries in parallel."""

from __future__ import annotations

import uuid
from concurrent.futures import ProcessPoolExecutor
from typing import Any

import structlog
from safir.logging import configure_logging

from ..config import config
from ..graph import Graph

__all__ = ["context", "create_executor", "startup"]

context: dict[str, Any] = {}
"""Per-process worker context, filled in by `startup`."""


def startup(graph: Graph) -> None:
    """Runs during worker start-up to set up the worker context."""
    configure_logging(
        profile=config.profile,
        log_level=config.log_level,
        name=config.logger_name,
    )
    logger = structlog.get_logger(config.logger_name)
    # The instance key uniquely identifies this worker in logs
    instance_key = uuid.uuid4().hex
    logger = logger.bind(worker_instance=instance_key)

    context["graph"] = graph
    context["logger"] = logger
    logger.debug("Start up complete", n=graph.n, m=graph.num_edges)


def create_executor(graph: Graph, workers: int) -> ProcessPoolExecutor:
    """Create a pool whose workers each hold a copy of ``graph``."""
    return ProcessPoolExecutor(
        max_workers=workers, initializer=startup, initargs=(graph,)
    )
