"""Tests for the benchmark service."""

from __future__ import annotations

from collections.abc import Callable
from pathlib import Path

import pytest
import structlog

from batchkdp.config import config
from batchkdp.domain import Engine, QueryRecord, RunConfig
from batchkdp.exceptions import GenerationError, UsageError
from batchkdp.graph import Graph
from batchkdp.oracles import max_disjoint_count
from batchkdp.queries import Batch
from batchkdp.repositories.edgelist import write_edge_list
from batchkdp.services.benchservice import SAMPLING_RULE, BenchService
from batchkdp.synthetic import gnp_graph, powerlaw_graph

WriteFile = Callable[[str, str], Path]


@pytest.fixture
def service() -> BenchService:
    return BenchService(structlog.get_logger(config.logger_name))


@pytest.fixture
def crossing_queries(write_file: WriteFile) -> Path:
    return write_file("queries.txt", "0 5\n1 5\n0 5\n3 5\n")


def test_generate(service: BenchService, diamond: Graph) -> None:
    batch = service.generate_queries(diamond, 2, 3, 0)
    assert batch.k == 2
    assert batch.pairs() == [(0, 3)] * 3


def test_generate_reduces_k(service: BenchService, diamond: Graph) -> None:
    batch = service.generate_queries(diamond, 3, 1, 0)
    assert batch.k == 2


def test_generate_is_seeded(service: BenchService, eight: Graph) -> None:
    first = service.generate_queries(eight, 1, 10, 3)
    assert first == service.generate_queries(eight, 1, 10, 3)
    assert all(s != t for s, t in first.pairs())


def test_generated_pairs_are_solvable(service: BenchService) -> None:
    g = gnp_graph(30, 0.3, 7)
    batch = service.generate_queries(g, 3, 10, 7)
    assert batch.k == 3
    for q in batch:
        assert max_disjoint_count(g, q.s, q.t, 3) == 3


def test_generate_fails(service: BenchService, path_graph: Graph) -> None:
    with pytest.raises(GenerationError):
        service.generate_queries(path_graph, 2, 1, 0)


def test_generate_requires_count(
    service: BenchService, diamond: Graph
) -> None:
    with pytest.raises(UsageError):
        service.generate_queries(diamond, 1, 0, 0)


def test_run(
    service: BenchService, crossing_file: Path, crossing_queries: Path
) -> None:
    run_config = RunConfig(graph=crossing_file, queries=crossing_queries, k=2)
    report = service.run(run_config)
    assert [r.found for r in report.records] == [2, 2, 2, 1]
    assert report.records[0].paths == [[0, 1, 4, 5], [0, 3, 2, 5]]
    aggregate = report.aggregate
    assert aggregate.engine == Engine.sharedp
    assert aggregate.verified
    assert aggregate.num_queries == 4
    assert aggregate.requested_k is None
    assert aggregate.seed is None
    assert aggregate.share_ratios
    assert aggregate.savings_ratio is not None


@pytest.mark.parametrize("engine", [Engine.maxflow, Engine.oracle])
def test_run_independent_engines(
    service: BenchService,
    crossing_file: Path,
    crossing_queries: Path,
    engine: Engine,
) -> None:
    run_config = RunConfig(
        graph=crossing_file, queries=crossing_queries, k=2, engine=engine
    )
    report = service.run(run_config)
    assert [r.found for r in report.records] == [2, 2, 2, 1]
    assert report.aggregate.verified
    assert report.aggregate.share_ratios == []
    assert report.aggregate.savings_ratio is None


def test_run_generated(service: BenchService, diamond_file: Path) -> None:
    report = service.run(RunConfig(graph=diamond_file, count=2, k=3))
    assert report.aggregate.k == 2
    assert report.aggregate.requested_k == 3
    assert report.aggregate.seed == 0
    assert report.aggregate.sampling == SAMPLING_RULE


def test_execute_shards(
    service: BenchService,
    crossing: Graph,
    crossing_file: Path,
    crossing_queries: Path,
) -> None:
    batch = Batch.from_pairs([(0, 5), (1, 5), (0, 5), (3, 5)], 2)
    base = RunConfig(graph=crossing_file, queries=crossing_queries, k=2)
    whole, _ = service.execute(crossing, batch, Engine.sharedp, base)
    sharded, stats = service.execute(
        crossing, batch, Engine.sharedp, base.copy(update={"shards": 2})
    )
    assert [r.paths for r in sharded] == [r.paths for r in whole]
    assert stats is not None


def test_execute_with_workers(
    service: BenchService,
    crossing: Graph,
    crossing_file: Path,
    crossing_queries: Path,
) -> None:
    batch = Batch.from_pairs([(0, 5), (1, 5), (0, 5), (3, 5)], 2)
    run_config = RunConfig(
        graph=crossing_file, queries=crossing_queries, k=2, workers=2
    )
    pooled, _ = service.execute(crossing, batch, Engine.maxflow, run_config)
    inline, _ = service.execute(
        crossing, batch, Engine.maxflow, run_config.copy(update={"workers": 1})
    )
    assert [r.paths for r in inline] == [r.paths for r in pooled]
    sharded, _ = service.execute(
        crossing, batch, Engine.sharedp, run_config.copy(update={"shards": 2})
    )
    assert [r.found for r in sharded] == [2, 2, 2, 1]


def test_bench_scaling(
    service: BenchService, crossing_file: Path, crossing_queries: Path
) -> None:
    run_config = RunConfig(
        graph=crossing_file, queries=crossing_queries, k=2, compare=True
    )
    reports = service.bench_scaling(run_config, [1, 4])
    steps = [(r.aggregate.engine, r.aggregate.num_queries) for r in reports]
    assert steps == [
        (Engine.sharedp, 1),
        (Engine.maxflow, 1),
        (Engine.sharedp, 4),
        (Engine.maxflow, 4),
    ]
    assert all(r.aggregate.verified for r in reports)


@pytest.mark.slow
def test_scaling_trend(service: BenchService, tmp_path: Path) -> None:
    """Per-query time of sharedp falls as the batch grows."""
    held = 0
    for seed in range(3):
        path = tmp_path / f"powerlaw-{seed}.txt"
        write_edge_list(powerlaw_graph(2000, 20000, seed), path)
        run_config = RunConfig(
            graph=path, count=100, k=5, seed=seed, compare=True
        )
        reports = service.bench_scaling(run_config, [1, 100])
        single, _, shared, maxflow = (r.aggregate for r in reports)
        assert all(r.aggregate.verified for r in reports)
        if (
            shared.mean_time <= 0.7 * single.mean_time
            and shared.mean_time <= maxflow.mean_time
        ):
            held += 1
    assert held >= 2


@pytest.mark.parametrize("sizes", [[2, 1], [], [0, 1], [1, 5]])
def test_bench_scaling_rejects_sizes(
    service: BenchService,
    crossing_file: Path,
    crossing_queries: Path,
    sizes: list[int],
) -> None:
    run_config = RunConfig(graph=crossing_file, queries=crossing_queries, k=2)
    with pytest.raises(UsageError):
        service.bench_scaling(run_config, sizes)


def test_bench_k_sweep(
    service: BenchService, crossing_file: Path, crossing_queries: Path
) -> None:
    run_config = RunConfig(graph=crossing_file, queries=crossing_queries, k=1)
    reports = service.bench_k_sweep(run_config, [1, 2, 3])
    assert [r.aggregate.k for r in reports] == [1, 2, 3]
    assert [sum(x.found for x in r.records) for r in reports] == [4, 7, 7]


def test_verify_report(
    service: BenchService,
    crossing: Graph,
    crossing_file: Path,
    crossing_queries: Path,
) -> None:
    report = service.run(
        RunConfig(graph=crossing_file, queries=crossing_queries, k=2)
    )
    assert service.verify_report(crossing, report).ok

    bad = report.copy(deep=True)
    bad.records[1] = QueryRecord(
        id=1,
        s=1,
        t=5,
        found=2,
        paths=[[1, 2, 5], [1, 2, 5]],
        elapsed=0.0,
        timed_out=False,
    )
    findings = service.verify_report(crossing, bad)
    assert findings.violations == [
        "query 1: path 1 [1, 2, 5]: duplicate path",
        "query 1: path 1 [1, 2, 5]: shared inner vertex 2 with path 0",
    ]


def test_probe_neighbors(service: BenchService, crossing: Graph) -> None:
    batch = Batch.from_pairs([(0, 5), (1, 5), (0, 2), (3, 5)], 3)
    assert service.probe_neighbors(crossing, batch, 50, 0).ok
