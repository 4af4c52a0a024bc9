"""Command-line interface for batchkdp.

Reports go to stdout (or ``--out``) as newline-delimited JSON; logs go to
stderr. Exit status is 0 on success, 1 when verification fails, 2 on
usage, input, or generation errors, and 3 when an engine fails
internally.
"""

from __future__ import annotations

import functools
import json
import logging
import sys
import traceback
from collections.abc import Callable, Sequence
from dataclasses import asdict
from pathlib import Path
from typing import Any, Optional, TypeVar, cast

import click
import structlog
from pydantic import ValidationError
from safir.logging import configure_logging
from structlog.stdlib import BoundLogger

from . import __version__
from .config import config
from .domain import Engine, RunConfig, RunReport
from .exceptions import (
    BatchKdpError,
    InternalConsistencyError,
    VerificationError,
)
from .graph import describe
from .queries import Batch
from .repositories.edgelist import load_graph, write_edge_list
from .repositories.queryfile import write_queries
from .repositories.reports import read_report, write_report
from .services.benchservice import BenchService
from .synthetic import gnp_graph, powerlaw_graph, random_dag

__all__ = ["main"]

F = TypeVar("F", bound=Callable[..., Any])


def _get_logger() -> BoundLogger:
    configure_logging(
        profile=config.profile,
        log_level=config.log_level,
        name=config.logger_name,
    )
    # keep stdout for report records
    for handler in logging.getLogger(config.logger_name).handlers:
        if isinstance(handler, logging.StreamHandler):
            handler.setStream(sys.stderr)
    return structlog.get_logger(config.logger_name)


def _exit_codes(command: F) -> F:
    """Map batchkdp errors onto exit statuses."""

    @functools.wraps(command)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return command(*args, **kwargs)
        except VerificationError as exc:
            click.echo(f"Error: {exc}", err=True)
            sys.exit(1)
        except InternalConsistencyError:
            click.echo(traceback.format_exc(), err=True, nl=False)
            sys.exit(3)
        except (BatchKdpError, ValidationError) as exc:
            click.echo(f"Error: {exc}", err=True)
            sys.exit(2)
        except click.ClickException:
            raise
        except Exception:
            # anything else is an engine bug too
            click.echo(traceback.format_exc(), err=True, nl=False)
            sys.exit(3)

    return cast(F, wrapper)


def _parse_csv(
    ctx: click.Context, param: click.Parameter, value: Optional[str]
) -> Optional[list[int]]:
    if value is None:
        return None
    try:
        return [int(part) for part in value.split(",") if part.strip()]
    except ValueError:
        raise click.BadParameter(
            f"expected comma-separated integers, got {value!r}"
        ) from None


def _write_reports(reports: Sequence[RunReport], out: Optional[Path]) -> None:
    if out is None:
        for report in reports:
            write_report(report, sys.stdout)
        return
    with out.open("w") as f:
        for report in reports:
            write_report(report, f)


def _ensure_verified(reports: Sequence[RunReport]) -> None:
    failed = [r for r in reports if not r.aggregate.verified]
    if failed:
        raise VerificationError(
            [
                f"{r.aggregate.engine.value} run with "
                f"{r.aggregate.num_queries} queries at k={r.aggregate.k}"
                for r in failed
            ]
        )


graph_option = click.option(
    "--graph",
    "graph",
    required=True,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Edge-list file with one 'u v' pair per line.",
)
undirected_option = click.option(
    "--undirected", is_flag=True, help="Insert every edge both ways."
)
seed_option = click.option(
    "--seed", type=int, default=0, show_default=True, help="Random seed."
)
out_option = click.option(
    "--out",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Output file (default: stdout).",
)


def _workload_options(command: F) -> F:
    options = [
        graph_option,
        click.option(
            "--queries",
            type=click.Path(exists=True, dir_okay=False, path_type=Path),
            default=None,
            help="Query file with one 's t' pair per line.",
        ),
        click.option(
            "--count",
            type=int,
            default=None,
            help="Generate this many queries instead of reading a file.",
        ),
        click.option(
            "--k", "k", type=int, required=True, help="Paths per query."
        ),
        seed_option,
        click.option(
            "--timeout",
            type=float,
            default=None,
            help="Per-query time limit in seconds.",
        ),
        undirected_option,
        click.option(
            "--workers",
            type=int,
            default=None,
            help="Worker processes for parallel execution.",
        ),
        click.option(
            "--shards",
            type=int,
            default=1,
            show_default=True,
            help="Sub-batches for the sharedp engine.",
        ),
        out_option,
    ]
    for option in reversed(options):
        command = option(command)
    return command


def _run_config(**kwargs: Any) -> RunConfig:
    # unset options fall back to the environment configuration
    return RunConfig(**{k: v for k, v in kwargs.items() if v is not None})


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(__version__, message="%(version)s")
def main() -> None:
    """Batch k-vertex-disjoint-paths engines and benchmarks."""


@main.command()
@_workload_options
@click.option(
    "--engine",
    type=click.Choice([e.value for e in Engine]),
    default=Engine.sharedp.value,
    show_default=True,
)
@click.option(
    "--no-timing",
    is_flag=True,
    help="Leave timing fields out of the report.",
)
@_exit_codes
def run(
    out: Optional[Path], engine: str, no_timing: bool, **kwargs: Any
) -> None:
    """Answer a query workload with one engine and verify the results."""
    logger = _get_logger().bind(command="run")
    run_config = _run_config(engine=Engine(engine), **kwargs)
    report = BenchService(logger).run(run_config)
    if out is None:
        write_report(report, sys.stdout, include_timing=not no_timing)
    else:
        write_report(report, out, include_timing=not no_timing)
    _ensure_verified([report])


@main.command()
@graph_option
@click.option("--k", "k", type=int, required=True, help="Paths per query.")
@click.option(
    "--count", type=int, required=True, help="Number of queries."
)
@seed_option
@undirected_option
@out_option
@_exit_codes
def generate(
    graph: Path,
    k: int,
    count: int,
    seed: int,
    undirected: bool,
    out: Optional[Path],
) -> None:
    """Sample solvable queries, reducing k until enough are found.

    The k used is written as a header comment of the query file.
    """
    logger = _get_logger().bind(command="generate")
    run_config = RunConfig(
        graph=graph, count=count, k=k, seed=seed, undirected=undirected
    )
    service = BenchService(logger)
    batch = service.load_batch(service.load_graph(run_config), run_config)
    write_queries(batch, sys.stdout if out is None else out)


@main.command()
@graph_option
@click.option(
    "--report",
    "report_path",
    required=True,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Report file written by the run command.",
)
@undirected_option
@click.option(
    "--probes",
    type=int,
    default=0,
    show_default=True,
    help=(
        "Re-run sharedp on the report's queries and check this many "
        "sampled neighbor answers after every iteration."
    ),
)
@seed_option
@_exit_codes
def verify(
    graph: Path,
    report_path: Path,
    undirected: bool,
    probes: int,
    seed: int,
) -> None:
    """Re-verify every record of a report against the graph."""
    logger = _get_logger().bind(command="verify")
    service = BenchService(logger)
    g = load_graph(graph, undirected=undirected)
    report = read_report(report_path)
    findings = service.verify_report(g, report)
    if probes > 0 and report.records:
        batch = Batch.from_pairs(
            ((r.s, r.t) for r in report.records), report.aggregate.k
        )
        batch.validate(g)
        findings = findings.merge(
            service.probe_neighbors(g, batch, probes, seed)
        )
    if not findings.ok:
        raise VerificationError(findings.violations)
    logger.info("Report verified", records=len(report.records))


@main.command()
@_workload_options
@click.option(
    "--sizes",
    callback=_parse_csv,
    default=None,
    help="Comma-separated ascending batch sizes for a scaling benchmark.",
)
@click.option(
    "--ks",
    callback=_parse_csv,
    default=None,
    help="Comma-separated k values for a k sweep.",
)
@click.option(
    "--engine",
    type=click.Choice([e.value for e in Engine]),
    default=Engine.sharedp.value,
    show_default=True,
    help="Engine of a k sweep.",
)
@click.option(
    "--compare", is_flag=True, help="Also run maxflow on every step."
)
@_exit_codes
def bench(
    out: Optional[Path],
    sizes: Optional[list[int]],
    ks: Optional[list[int]],
    engine: str,
    **kwargs: Any,
) -> None:
    """Benchmark sharedp over batch sizes, or an engine over k values."""
    if (sizes is None) == (ks is None):
        raise click.UsageError("Give exactly one of --sizes or --ks.")
    logger = _get_logger().bind(command="bench")
    service = BenchService(logger)
    run_config = _run_config(engine=Engine(engine), **kwargs)
    if sizes is not None:
        reports = service.bench_scaling(run_config, sizes)
    else:
        assert ks is not None
        reports = service.bench_k_sweep(run_config, ks)
    _write_reports(reports, out)
    _ensure_verified(reports)


@main.command()
@click.option(
    "--kind",
    type=click.Choice(["gnp", "powerlaw", "dag"]),
    required=True,
)
@click.option("--n", "n", type=int, required=True, help="Vertex count.")
@click.option(
    "--p",
    "p",
    type=float,
    default=0.1,
    show_default=True,
    help="Edge probability (gnp, dag).",
)
@click.option(
    "--m",
    "m",
    type=int,
    default=None,
    help="Edges to draw (powerlaw; default 10n).",
)
@click.option(
    "--exponent",
    type=float,
    default=2.5,
    show_default=True,
    help="Degree exponent (powerlaw).",
)
@seed_option
@undirected_option
@click.option(
    "--out",
    required=True,
    type=click.Path(dir_okay=False, path_type=Path),
    help="Edge-list file to write.",
)
@_exit_codes
def synth(
    kind: str,
    n: int,
    p: float,
    m: Optional[int],
    exponent: float,
    seed: int,
    undirected: bool,
    out: Path,
) -> None:
    """Write a seeded synthetic graph and print its statistics."""
    logger = _get_logger().bind(command="synth")
    if kind == "gnp":
        g = gnp_graph(n, p, seed, undirected=undirected)
    elif kind == "powerlaw":
        g = powerlaw_graph(
            n, m if m is not None else 10 * n, seed, exponent=exponent
        )
    else:
        g = random_dag(n, p, seed)
    write_edge_list(g, out)
    stats = describe(g)
    logger.info("Wrote graph", path=str(out), n=stats.n, m=stats.m)
    click.echo(json.dumps(asdict(stats)))
