"""Seeded equivalence runs over many random graphs and batches."""

from __future__ import annotations

import numpy as np
import pytest

from batchkdp.engines.maxflow import maxflow_single
from batchkdp.engines.sharedp import sharedp_batch
from batchkdp.graph import Graph
from batchkdp.mergedstate import ResultState, init_state
from batchkdp.oracles import (
    max_disjoint_count,
    neighbor_oracle_check,
    verify_disjoint,
)
from batchkdp.queries import Batch
from batchkdp.synthetic import gnp_graph

DENSITIES = [0.05, 0.15, 0.3]


def random_graph(rng: np.random.Generator) -> Graph:
    n = int(rng.integers(5, 51))
    p = float(rng.choice(DENSITIES))
    return gnp_graph(n, p, int(rng.integers(2**31)))


def random_batch(
    rng: np.random.Generator, g: Graph, size: int, k: int
) -> Batch:
    s = rng.integers(0, g.n, size=size)
    # shift t past s so the endpoints differ
    t = rng.integers(0, g.n - 1, size=size)
    t = t + (t >= s)
    return Batch.from_pairs(zip(s.tolist(), t.tolist()), k)


@pytest.mark.parametrize("chunk", range(10))
def test_engines_match_oracle(chunk: int) -> None:
    rng = np.random.default_rng(1000 + chunk)
    for _ in range(50):
        g = random_graph(rng)
        batch = random_batch(rng, g, 1, int(rng.integers(1, 6)))
        [q] = batch
        expected = max_disjoint_count(g, q.s, q.t, batch.k)
        [shared] = sharedp_batch(g, batch)
        single = maxflow_single(g, q, batch.k)
        assert shared.found == expected, (g, q)
        assert single.found == expected, (g, q)
        assert verify_disjoint(g, q.s, q.t, shared.paths).ok
        assert verify_disjoint(g, q.s, q.t, single.paths).ok


@pytest.mark.parametrize("chunk", range(5))
def test_batches_match_singletons(chunk: int) -> None:
    rng = np.random.default_rng(2000 + chunk)
    for _ in range(10):
        g = random_graph(rng)
        size = int(rng.integers(2, 65))
        batch = random_batch(rng, g, size, int(rng.integers(1, 6)))
        together = sharedp_batch(g, batch)
        for q in batch:
            [alone] = sharedp_batch(
                g, Batch.from_pairs([(q.s, q.t)], batch.k)
            )
            assert together[q.id].found == alone.found, (g, q)
            assert together[q.id].paths == alone.paths, (g, q)


def test_neighbor_answers_over_many_states() -> None:
    rng = np.random.default_rng(3000)
    findings: list[str] = []
    states = 0
    for _ in range(50):
        g = random_graph(rng)
        size = int(rng.integers(2, 65))
        batch = random_batch(rng, g, size, int(rng.integers(1, 6)))

        def check(iteration: int, st: ResultState) -> None:
            nonlocal states
            states += 1
            seed = int(rng.integers(2**31))
            report = neighbor_oracle_check(g, st, batch, 500, seed)
            findings.extend(report.violations)

        check(0, init_state(batch, g))
        sharedp_batch(g, batch, on_iteration=check)
    # 500 samples per state; plain ids are in every query's split-graph
    assert states >= 50
    assert findings == []
