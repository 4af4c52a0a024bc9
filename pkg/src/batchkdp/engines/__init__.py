"""Path-finding engines."""

from .instrumentation import LevelStats, TraversalStats
from .maxflow import maxflow_single
from .sharding import run_shard, sharedp_sharded
from .sharedp import sharedp_batch
from .splitgraph import ExplicitSplitGraph, build_explicit_split_graph

__all__ = [
    "ExplicitSplitGraph",
    "LevelStats",
    "TraversalStats",
    "build_explicit_split_graph",
    "maxflow_single",
    "run_shard",
    "sharedp_batch",
    "sharedp_sharded",
]
