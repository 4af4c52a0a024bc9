"""Query list files: one ``s t`` pair per line, ids in file order."""

from __future__ import annotations

from pathlib import Path
from typing import TextIO

from ..exceptions import QueryValidationError
from ..graph import Graph
from ..queries import Batch
from .edgelist import parse_pairs

__all__ = ["load_queries", "write_queries"]


def load_queries(path: Path, g: Graph, k: int) -> Batch:
    """Load the queries of ``path`` as a batch with common ``k``.

    Duplicate pairs become distinct queries.

    Raises
    ------
    batchkdp.exceptions.QueryValidationError
        If a line is malformed, has ``s == t``, or names a vertex outside
        ``g``.
    """
    pairs = []
    for lineno, s, t in parse_pairs(path, QueryValidationError):
        if s == t:
            raise QueryValidationError(
                f"source and target are both {s}", path, lineno
            )
        for v in (s, t):
            if v >= g.n:
                raise QueryValidationError(
                    f"vertex {v} is not in a graph with {g.n} vertices",
                    path,
                    lineno,
                )
        pairs.append((s, t))
    return Batch.from_pairs(pairs, k)


def write_queries(batch: Batch, out: Path | TextIO) -> None:
    """Write the ``s t`` pairs of ``batch`` in id order.

    The header comment records the batch's ``k``.
    """
    lines = [f"# k={batch.k}\n"]
    lines.extend(f"{q.s} {q.t}\n" for q in batch)
    if isinstance(out, Path):
        out.write_text("".join(lines))
    else:
        out.writelines(lines)
