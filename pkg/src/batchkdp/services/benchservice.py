"""Workload generation, engine runs, and benchmarks."""

from __future__ import annotations

import time
from collections.abc import Sequence
from itertools import repeat

import numpy as np
from structlog.stdlib import BoundLogger

from ..config import config
from ..domain import (
    AggregateRecord,
    Engine,
    QueryRecord,
    QueryResult,
    RunConfig,
    RunReport,
    VerifyReport,
)
from ..engines.instrumentation import TraversalStats
from ..engines.maxflow import maxflow_single
from ..engines.sharding import (
    merge_shard_results,
    run_shard,
    sharedp_sharded,
)
from ..engines.sharedp import sharedp_batch
from ..exceptions import GenerationError, UsageError
from ..graph import Graph, describe
from ..mergedstate import ResultState, init_state
from ..oracles import (
    max_disjoint_count,
    neighbor_oracle_check,
    verify_disjoint,
)
from ..queries import Batch, Query
from ..repositories.edgelist import load_graph
from ..repositories.queryfile import load_queries
from ..worker.functions import run_query, solve_query, solve_shard
from ..worker.main import create_executor

__all__ = ["BenchService", "SAMPLING_RULE"]

SAMPLING_RULE = "uniform over vertices with out-degree(s), in-degree(t) >= k"
"""Candidate pair distribution recorded in generated reports."""


class BenchService:
    """Service that generates workloads and runs and verifies engines."""

    def __init__(self, logger: BoundLogger) -> None:
        self._logger = logger

    def load_graph(self, run_config: RunConfig) -> Graph:
        g = load_graph(run_config.graph, undirected=run_config.undirected)
        stats = describe(g)
        self._logger.info(
            "Loaded graph",
            path=str(run_config.graph),
            n=stats.n,
            m=stats.m,
            max_out_degree=stats.max_out_degree,
            max_in_degree=stats.max_in_degree,
        )
        return g

    def load_batch(self, g: Graph, run_config: RunConfig) -> Batch:
        """Read the configured query file or generate a workload."""
        if run_config.queries is not None:
            batch = load_queries(run_config.queries, g, run_config.k)
            self._logger.info(
                "Loaded queries",
                path=str(run_config.queries),
                count=len(batch),
            )
            return batch
        assert run_config.count is not None
        return self.generate_queries(
            g, run_config.k, run_config.count, run_config.seed
        )

    def _solvable(self, g: Graph, s: int, t: int, k: int) -> bool:
        if g.n <= config.oracle_max_vertices:
            return max_disjoint_count(g, s, t, k) >= k
        return maxflow_single(g, Query(0, s, t), k).found >= k

    def generate_queries(
        self, g: Graph, k: int, count: int, seed: int
    ) -> Batch:
        """Sample ``count`` solvable queries, reducing ``k`` if needed.

        Candidate pairs are drawn uniformly from vertices with out-degree
        at least ``k`` (sources) and in-degree at least ``k`` (targets)
        and kept when they have ``k`` disjoint paths. A ``k`` is accepted
        once ``count`` pairs are kept with at least the configured success
        fraction over the draws made, within ``count`` times the
        configured attempt factor; otherwise the next smaller ``k`` of the
        schedule is tried. The returned batch carries the ``k`` used.

        Raises
        ------
        batchkdp.exceptions.GenerationError
            If every ``k`` of the schedule fails.
        """
        if count < 1:
            raise UsageError(f"count must be at least 1, got {count}")
        rng = np.random.default_rng(seed)
        out_deg = np.array([g.out_degree(v) for v in range(g.n)], dtype=int)
        in_deg = np.array([g.in_degree(v) for v in range(g.n)], dtype=int)
        schedule = [k] + sorted(
            (x for x in set(config.k_schedule) if x < k), reverse=True
        )
        budget = count * config.generator_attempt_factor
        for kk in schedule:
            sources = np.flatnonzero(out_deg >= kk)
            targets = np.flatnonzero(in_deg >= kk)
            pairs: list[tuple[int, int]] = []
            attempts = 0
            if len(sources) and len(targets):
                while len(pairs) < count and attempts < budget:
                    attempts += 1
                    s = int(sources[rng.integers(len(sources))])
                    t = int(targets[rng.integers(len(targets))])
                    if s != t and self._solvable(g, s, t, kk):
                        pairs.append((s, t))
            rate = len(pairs) / attempts if attempts else 0.0
            if len(pairs) == count and rate >= config.generator_min_success:
                self._logger.info(
                    "Generated queries",
                    k=kk,
                    requested_k=k,
                    count=count,
                    attempts=attempts,
                    seed=seed,
                )
                return Batch.from_pairs(pairs, kk)
            self._logger.info(
                "Reducing k",
                k=kk,
                found=len(pairs),
                attempts=attempts,
                success_rate=round(rate, 3),
            )
        raise GenerationError(
            f"No k in {schedule} yields {count} solvable queries"
        )

    def execute(
        self, g: Graph, batch: Batch, engine: Engine, run_config: RunConfig
    ) -> tuple[list[QueryResult], TraversalStats | None]:
        """Run ``engine`` on ``batch``; results are in query id order.

        Level counters are returned for the shared engine only.
        """
        logger = self._logger.bind(
            engine=engine.value, k=batch.k, queries=len(batch)
        )
        timeout = run_config.timeout
        workers = run_config.workers
        if engine == Engine.sharedp:
            parts = batch.partition(run_config.shards)
            if len(parts) > 1 and workers > 1:
                with create_executor(g, workers) as executor:
                    outcomes = list(
                        executor.map(
                            solve_shard,
                            [sub for sub, _ in parts],
                            repeat(timeout),
                        )
                    )
                return merge_shard_results(batch, parts, outcomes)
            if len(parts) > 1:
                return sharedp_sharded(
                    g, batch, run_config.shards, timeout=timeout, logger=logger
                )
            return run_shard(g, batch, timeout=timeout, logger=logger)

        if workers > 1 and len(batch) > 1:
            with create_executor(g, workers) as executor:
                results = list(
                    executor.map(
                        solve_query,
                        repeat(engine),
                        batch.queries,
                        repeat(batch.k),
                        repeat(timeout),
                    )
                )
        else:
            results = [
                run_query(g, engine, q, batch.k, timeout, logger)
                for q in batch
            ]
        return results, None

    def verify_results(
        self, g: Graph, results: Sequence[QueryResult]
    ) -> VerifyReport:
        report = VerifyReport()
        for r in results:
            findings = verify_disjoint(g, r.s, r.t, r.paths).violations
            if r.found != len(r.paths):
                findings.append(
                    f"found={r.found} but {len(r.paths)} paths reported"
                )
            if r.found > r.k:
                findings.append(f"found={r.found} exceeds k={r.k}")
            report.violations.extend(
                f"query {r.query_id}: {msg}" for msg in findings
            )
        return report

    def run_batch(
        self,
        g: Graph,
        batch: Batch,
        engine: Engine,
        run_config: RunConfig,
        *,
        requested_k: int | None = None,
    ) -> RunReport:
        """Run and verify one engine on one batch."""
        start = time.monotonic()
        results, stats = self.execute(g, batch, engine, run_config)
        total = time.monotonic() - start
        verification = self.verify_results(g, results)
        for violation in verification.violations:
            self._logger.error("Verification failed", violation=violation)
        num = len(results)
        if engine == Engine.sharedp:
            mean = total / num if num else 0.0
        else:
            mean = sum(r.elapsed for r in results) / num if num else 0.0
        ratios = stats.share_ratios if stats is not None else []
        aggregate = AggregateRecord(
            engine=engine,
            k=batch.k,
            requested_k=(
                requested_k
                if requested_k is not None and requested_k != batch.k
                else None
            ),
            num_queries=num,
            mean_time=mean,
            total_time=total,
            timed_out=sum(r.timed_out for r in results),
            verified=verification.ok,
            seed=run_config.seed if run_config.count is not None else None,
            sampling=SAMPLING_RULE if run_config.count is not None else None,
            share_ratio_mean=sum(ratios) / len(ratios) if ratios else None,
            share_ratio_max=max(ratios) if ratios else None,
            savings_ratio=(
                stats.savings_ratio if stats is not None else None
            ),
            share_ratios=ratios,
        )
        self._logger.info(
            "Finished run",
            engine=engine.value,
            k=batch.k,
            queries=num,
            mean_time=mean,
            total_time=total,
            timed_out=aggregate.timed_out,
            verified=aggregate.verified,
        )
        return RunReport(
            records=[QueryRecord.from_result(r) for r in results],
            aggregate=aggregate,
        )

    def run(self, run_config: RunConfig) -> RunReport:
        """Load the inputs, run the configured engine, and verify."""
        g = self.load_graph(run_config)
        batch = self.load_batch(g, run_config)
        return self.run_batch(
            g,
            batch,
            run_config.engine,
            run_config,
            requested_k=run_config.k,
        )

    def bench_scaling(
        self, run_config: RunConfig, sizes: Sequence[int]
    ) -> list[RunReport]:
        """Run the shared engine on growing prefixes of the workload.

        With ``compare`` set, maxflow runs on every prefix as well and its
        report follows the shared engine's.
        """
        if list(sizes) != sorted(sizes) or not sizes or min(sizes) < 1:
            raise UsageError(
                f"sizes must be positive and ascending, got {list(sizes)}"
            )
        g = self.load_graph(run_config)
        batch = self.load_batch(g, run_config)
        if sizes[-1] > len(batch):
            raise UsageError(
                f"largest size {sizes[-1]} exceeds the {len(batch)} "
                f"available queries"
            )
        engines = [Engine.sharedp]
        if run_config.compare:
            engines.append(Engine.maxflow)
        reports = []
        for size in sizes:
            for engine in engines:
                self._logger.info(
                    "Benchmark step", size=size, engine=engine.value
                )
                reports.append(
                    self.run_batch(
                        g,
                        batch.prefix(size),
                        engine,
                        run_config,
                        requested_k=run_config.k,
                    )
                )
        return reports

    def bench_k_sweep(
        self, run_config: RunConfig, ks: Sequence[int]
    ) -> list[RunReport]:
        """Run the configured engine on the workload at every ``k``.

        Generated workloads are sampled once, at the largest ``k``.
        """
        if not ks or min(ks) < 1:
            raise UsageError(f"ks must be positive, got {list(ks)}")
        g = self.load_graph(run_config)
        batch = self.load_batch(g, run_config.copy(update={"k": max(ks)}))
        engines = [run_config.engine]
        if run_config.compare and Engine.maxflow not in engines:
            engines.append(Engine.maxflow)
        reports = []
        for k in ks:
            for engine in engines:
                self._logger.info("Benchmark step", k=k, engine=engine.value)
                reports.append(
                    self.run_batch(g, batch.with_k(k), engine, run_config)
                )
        return reports

    def verify_report(self, g: Graph, report: RunReport) -> VerifyReport:
        """Re-verify every record of a report against ``g``."""
        k = report.aggregate.k
        results = [
            QueryResult(
                query_id=r.id,
                s=r.s,
                t=r.t,
                k=max(k, r.found),
                found=r.found,
                paths=r.paths,
            )
            for r in report.records
        ]
        verification = self.verify_results(g, results)
        verification.violations.extend(
            f"query {r.id}: found={r.found} exceeds k={k}"
            for r in report.records
            if r.found > k
        )
        if len(report.records) != report.aggregate.num_queries:
            verification.violations.append(
                f"{len(report.records)} records but the aggregate counts "
                f"{report.aggregate.num_queries} queries"
            )
        return verification

    def probe_neighbors(
        self, g: Graph, batch: Batch, samples: int, seed: int
    ) -> VerifyReport:
        """Check merged neighbor answers after every shared iteration.

        Runs the shared engine on ``batch`` and applies the neighbor
        oracle with ``samples`` probes to the initial state and to the
        state after each iteration.
        """
        findings = VerifyReport()

        def check(iteration: int, st: ResultState) -> None:
            nonlocal findings
            report = neighbor_oracle_check(
                g, st, batch, samples, seed + iteration
            )
            if not report.ok:
                self._logger.error(
                    "Neighbor check failed",
                    iteration=iteration,
                    violations=len(report.violations),
                )
            findings = findings.merge(report)

        check(0, init_state(batch, g))
        sharedp_batch(g, batch, logger=self._logger, on_iteration=check)
        self._logger.info(
            "Probed neighbor answers",
            queries=len(batch),
            samples=samples,
            ok=findings.ok,
        )
        return findings
