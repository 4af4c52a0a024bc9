"""Exceptions raised by batchkdp."""

from __future__ import annotations

from pathlib import Path

__all__ = [
    "BatchKdpError",
    "UsageError",
    "QuerySetWidthError",
    "OracleGuardError",
    "InputError",
    "GraphLoadError",
    "QueryValidationError",
    "GenerationError",
    "InternalConsistencyError",
    "VerificationError",
]


class BatchKdpError(Exception):
    """Base class for batchkdp errors."""


class UsageError(BatchKdpError):
    """The caller used an API or the CLI incorrectly."""


class QuerySetWidthError(UsageError):
    """Two query sets of different widths were combined."""

    def __init__(self, left: int, right: int) -> None:
        super().__init__(
            f"Query set width mismatch: {left} vs {right} queries"
        )
        self.left = left
        self.right = right


class OracleGuardError(UsageError):
    """A graph is too large for the dense max-flow oracle."""

    def __init__(self, n: int, limit: int) -> None:
        super().__init__(
            f"Graph has {n} vertices; the oracle is limited to {limit}"
        )
        self.n = n
        self.limit = limit


class InputError(BatchKdpError):
    """An input file could not be parsed or validated.

    Parameters
    ----------
    reason
        Human-readable description of the problem.
    path
        The file being read.
    line
        The 1-based line number, if the problem is tied to one line.
    """

    def __init__(
        self, reason: str, path: Path | str, line: int | None = None
    ) -> None:
        location = f"{path}:{line}" if line is not None else str(path)
        super().__init__(f"{location}: {reason}")
        self.reason = reason
        self.path = Path(path)
        self.line = line


class GraphLoadError(InputError):
    """An edge list file is malformed."""


class QueryValidationError(InputError):
    """A query file is malformed or names invalid vertices."""


class GenerationError(BatchKdpError):
    """No solvable query workload could be generated."""


class InternalConsistencyError(BatchKdpError):
    """An engine data structure violates its own invariants.

    This always indicates a bug in an engine rather than bad input.
    """


class VerificationError(BatchKdpError):
    """A reported path set failed disjointness verification."""

    def __init__(self, violations: list[str]) -> None:
        shown = "; ".join(violations[:5])
        more = len(violations) - 5
        if more > 0:
            shown += f" (and {more} more)"
        super().__init__(f"Verification failed: {shown}")
        self.violations = violations
