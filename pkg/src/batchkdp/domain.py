"""Domain models for query results, verification findings, and reports."""

from __future__ import annotations

from enum import Enum
from pathlib import Path
from typing import Any, Literal, Optional

from pydantic import (
    BaseModel,
    Field,
    PositiveFloat,
    PositiveInt,
    root_validator,
    validator,
)

from .config import config

__all__ = [
    "Engine",
    "QueryResult",
    "VerifyReport",
    "QueryRecord",
    "AggregateRecord",
    "RunReport",
    "RunConfig",
]


class Engine(str, Enum):
    """Path-finding engine selector."""

    sharedp = "sharedp"

    maxflow = "maxflow"

    oracle = "oracle"


class QueryResult(BaseModel):
    """The outcome of one kDP query."""

    query_id: int = Field(..., description="Dense id of the query.")

    s: int = Field(..., description="Source vertex.")

    t: int = Field(..., description="Target vertex.")

    k: int = Field(..., description="Number of disjoint paths requested.")

    found: int = Field(
        ..., description="Number of disjoint paths obtained (at most k)."
    )

    paths: list[list[int]] = Field(
        default_factory=list,
        description="The disjoint paths in original vertex ids.",
    )

    elapsed: float = Field(
        0.0,
        description=(
            "Seconds spent on the query. For the shared engine this is the "
            "query's completion latency since the batch started."
        ),
    )

    timed_out: bool = Field(
        False, description="Whether the time limit stopped the query."
    )

    @validator("found")
    def _found_within_k(cls, v: int, values: dict) -> int:
        k = values.get("k")
        if k is not None and v > k:
            raise ValueError(f"found={v} exceeds k={k}")
        return v


class VerifyReport(BaseModel):
    """Findings of a verification pass; ``ok`` iff there are none."""

    violations: list[str] = Field(
        default_factory=list, description="Human-readable findings."
    )

    @property
    def ok(self) -> bool:
        return not self.violations

    def merge(self, other: VerifyReport) -> VerifyReport:
        return VerifyReport(violations=self.violations + other.violations)


class QueryRecord(BaseModel):
    """One line of a run report: the result of a single query."""

    kind: Literal["query"] = "query"

    id: int

    s: int

    t: int

    found: int

    paths: list[list[int]]

    elapsed: float

    timed_out: bool

    @classmethod
    def from_result(cls, result: QueryResult) -> QueryRecord:
        return cls(
            id=result.query_id,
            s=result.s,
            t=result.t,
            found=result.found,
            paths=result.paths,
            elapsed=result.elapsed,
            timed_out=result.timed_out,
        )


class AggregateRecord(BaseModel):
    """The trailing summary line of a run report."""

    kind: Literal["aggregate"] = "aggregate"

    engine: Engine

    k: int = Field(..., description="k used for the run.")

    requested_k: Optional[int] = Field(
        None,
        description="k requested from the generator, when it reduced k.",
    )

    num_queries: int

    mean_time: float = Field(
        ..., description="Mean per-query time in seconds."
    )

    total_time: float = Field(..., description="Wall-clock seconds.")

    timed_out: int = Field(0, description="Number of timed-out queries.")

    verified: bool = Field(
        ..., description="Whether every record passed verification."
    )

    seed: Optional[int] = None

    sampling: Optional[str] = Field(
        None, description="Candidate pair sampling rule of the generator."
    )

    share_ratio_mean: Optional[float] = Field(
        None,
        description=(
            "Mean fraction of expanded entries shared by two or more "
            "queries, over all levels."
        ),
    )

    share_ratio_max: Optional[float] = None

    savings_ratio: Optional[float] = Field(
        None,
        description=(
            "1 - expanded entries / per-query expansions, over the batch."
        ),
    )

    share_ratios: list[float] = Field(
        default_factory=list, description="Per-level sharing ratios."
    )


class RunReport(BaseModel):
    """All records of one engine run."""

    records: list[QueryRecord]

    aggregate: AggregateRecord

    @validator("records")
    def _ordered(cls, v: list[QueryRecord]) -> list[QueryRecord]:
        if [r.id for r in v] != list(range(len(v))):
            raise ValueError("records must be in query id order")
        return v

    def lines(self, *, include_timing: bool = True) -> list[str]:
        """Render as newline-delimited JSON lines, aggregate last."""
        timing = {"elapsed"}
        aggregate_timing = {"mean_time", "total_time"}
        out = [
            r.json(exclude=None if include_timing else timing)
            for r in self.records
        ]
        out.append(
            self.aggregate.json(
                exclude=None if include_timing else aggregate_timing
            )
        )
        return out


class RunConfig(BaseModel):
    """Settings of one engine run, usually built from CLI flags."""

    graph: Path = Field(..., description="Edge-list file.")

    queries: Optional[Path] = Field(
        None, description="Query file; exclusive with ``count``."
    )

    count: Optional[PositiveInt] = Field(
        None, description="Number of queries to generate instead."
    )

    k: PositiveInt = Field(..., description="Disjoint paths per query.")

    engine: Engine = Engine.sharedp

    seed: int = 0

    timeout: PositiveFloat = Field(
        default_factory=lambda: config.timeout,
        description="Per-query time limit in seconds.",
    )

    undirected: bool = False

    workers: PositiveInt = Field(default_factory=lambda: config.workers)

    shards: PositiveInt = Field(
        1, description="Sub-batches for the shared engine."
    )

    compare: bool = Field(
        False, description="Also run maxflow in benchmarks."
    )

    @root_validator(skip_on_failure=True)
    def _one_query_source(cls, values: dict[str, Any]) -> dict[str, Any]:
        if (values.get("queries") is None) == (values.get("count") is None):
            raise ValueError("exactly one of queries or count is required")
        return values
