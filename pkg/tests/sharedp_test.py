"""Tests for the shared batch engine."""

from __future__ import annotations

import time

import pytest

from batchkdp.engines.instrumentation import LevelStats, TraversalStats
from batchkdp.engines.sharedp import (
    SearchState,
    backward_expand,
    forward_expand,
    reconstruct_path,
    sharedp_batch,
)
from batchkdp.exceptions import InternalConsistencyError
from batchkdp.graph import Graph
from batchkdp.mergedstate import ResultState, init_state
from batchkdp.oracles import check_state
from batchkdp.queries import Batch


def test_single_query(diamond: Graph) -> None:
    batch = Batch.from_pairs([(0, 3)], 2)
    [result] = sharedp_batch(diamond, batch)
    assert result.found == 2
    assert result.paths == [[0, 1, 3], [0, 2, 3]]
    assert not result.timed_out


def test_duplicate_queries_share_everything(diamond: Graph) -> None:
    batch = Batch.from_pairs([(0, 3), (0, 3)], 2)
    stats = TraversalStats()
    results = sharedp_batch(diamond, batch, on_level=stats.record)
    assert results[0].paths == results[1].paths == [[0, 1, 3], [0, 2, 3]]
    assert stats.share_ratios
    assert all(ratio == 1.0 for ratio in stats.share_ratios)
    assert stats.savings_ratio == pytest.approx(0.5)


def test_crossing_batch(crossing: Graph) -> None:
    batch = Batch.from_pairs([(0, 5), (1, 5)], 2)
    q0, q1 = sharedp_batch(crossing, batch)
    assert q0.paths == [[0, 1, 4, 5], [0, 3, 2, 5]]
    assert q1.found == 2
    assert q1.paths == [[1, 2, 5], [1, 4, 5]]


def test_eight_vertex(eight: Graph) -> None:
    [result] = sharedp_batch(eight, Batch.from_pairs([(0, 7)], 4))
    assert result.found == 3


def test_retired_queries_leave_frontier(diamond: Graph) -> None:
    batch = Batch.from_pairs([(0, 3), (3, 0)], 2)
    levels: list[LevelStats] = []
    results = sharedp_batch(diamond, batch, on_level=levels.append)
    assert results[0].found == 2
    assert results[1].found == 0
    assert not results[1].timed_out
    later = [lv for lv in levels if lv.iteration == 2]
    assert later
    assert all(1 not in lv.frontier for lv in later)


def test_state_after_every_iteration(crossing: Graph) -> None:
    batch = Batch.from_pairs([(0, 5), (1, 5), (3, 5)], 3)
    seen: list[int] = []

    def check(iteration: int, st: ResultState) -> None:
        seen.append(iteration)
        assert check_state(st, batch).ok

    sharedp_batch(crossing, batch, on_iteration=check)
    assert seen[0] == 1
    assert seen == list(range(1, len(seen) + 1))


def test_past_deadline(diamond: Graph) -> None:
    batch = Batch.from_pairs([(0, 3), (0, 2)], 2)
    results = sharedp_batch(
        diamond, batch, deadline=time.monotonic() - 1
    )
    for result in results:
        assert result.timed_out
        assert result.found == 0
        assert result.paths == []


def test_reconstruct_path(diamond: Graph) -> None:
    batch = Batch.from_pairs([(0, 3)], 1)
    st = init_state(batch, diamond)
    ss = SearchState.seed(batch, batch.all())
    forward_expand(0, batch.all(), diamond, st, ss)
    assert not ss.joint
    backward_expand(3, batch.all(), diamond, st, ss)
    assert ss.joint == {1: batch.all()}
    assert not ss.undone
    assert reconstruct_path(batch[0], ss) == [0, 1, 3]


def test_reconstruct_without_meeting(diamond: Graph) -> None:
    batch = Batch.from_pairs([(0, 3)], 1)
    ss = SearchState.seed(batch, batch.all())
    with pytest.raises(InternalConsistencyError):
        reconstruct_path(batch[0], ss)
