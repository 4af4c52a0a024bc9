"""Newline-delimited JSON run reports."""

from __future__ import annotations

import json
from pathlib import Path
from typing import TextIO

from pydantic import ValidationError

from ..domain import AggregateRecord, QueryRecord, RunReport
from ..exceptions import InputError

__all__ = ["write_report", "read_report"]


def write_report(
    report: RunReport, out: Path | TextIO, *, include_timing: bool = True
) -> None:
    """Write one JSON object per query followed by the aggregate."""
    text = "".join(
        f"{line}\n" for line in report.lines(include_timing=include_timing)
    )
    if isinstance(out, Path):
        out.write_text(text)
    else:
        out.write(text)


def read_report(path: Path) -> RunReport:
    """Read a report written by `write_report`.

    Raises
    ------
    batchkdp.exceptions.InputError
        If the file cannot be read, a line is not a valid record, or the
        aggregate record is missing or not last.
    """
    try:
        lines = path.read_text().splitlines()
    except OSError as exc:
        raise InputError(f"cannot read file ({exc.strerror})", path) from exc
    records: list[QueryRecord] = []
    aggregate: AggregateRecord | None = None
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        if aggregate is not None:
            raise InputError("record after the aggregate", path, lineno)
        try:
            data = json.loads(line)
            if data.get("kind") == "aggregate":
                aggregate = AggregateRecord.parse_obj(data)
            else:
                records.append(QueryRecord.parse_obj(data))
        except (ValueError, AttributeError, ValidationError) as exc:
            raise InputError(f"invalid record: {exc}", path, lineno) from exc
    if aggregate is None:
        raise InputError("missing aggregate record", path)
    try:
        return RunReport(records=records, aggregate=aggregate)
    except ValidationError as exc:
        raise InputError(str(exc), path) from exc
