"""Edge-list text files: one ``u v`` pair per line, ``#`` comments."""

from __future__ import annotations

from collections.abc import Iterator
from pathlib import Path

from ..exceptions import GraphLoadError, InputError
from ..graph import Graph

__all__ = ["load_graph", "parse_pairs", "write_edge_list"]


def parse_pairs(
    path: Path, error: type[InputError] = GraphLoadError
) -> Iterator[tuple[int, int, int]]:
    """Yield ``(line number, a, b)`` for every data line of ``path``.

    Blank lines and lines starting with ``#`` are skipped. ``error`` is
    raised, naming the line, for anything that is not two non-negative
    integers.
    """
    try:
        f = path.open()
    except OSError as exc:
        raise error(f"cannot read file ({exc.strerror})", path) from exc
    with f:
        for lineno, line in enumerate(f, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            fields = text.split()
            if len(fields) != 2:
                raise error(
                    f"expected two integers, got {len(fields)} fields",
                    path,
                    lineno,
                )
            try:
                a, b = int(fields[0]), int(fields[1])
            except ValueError:
                raise error(
                    f"not an integer pair: {text!r}", path, lineno
                ) from None
            if a < 0 or b < 0:
                raise error(f"negative vertex id in {text!r}", path, lineno)
            yield lineno, a, b


def load_graph(path: Path, *, undirected: bool = False) -> Graph:
    """Load an edge-list file.

    Vertex ids are used verbatim; the graph has ``max id + 1`` vertices
    and ids missing from the file become isolated vertices. Self-loops
    and duplicate edges are dropped.

    Raises
    ------
    batchkdp.exceptions.GraphLoadError
        If the file cannot be read or a line is malformed.
    """
    edges = [(u, v) for _, u, v in parse_pairs(path)]
    n = max((max(u, v) for u, v in edges), default=-1) + 1
    return Graph.from_edges(n, edges, undirected=undirected)


def write_edge_list(g: Graph, path: Path) -> None:
    """Write ``g`` as an edge list in ascending ``(u, v)`` order."""
    with path.open("w") as f:
        f.write(f"# n={g.n} m={g.num_edges}\n")
        for u, v in g.edges():
            f.write(f"{u} {v}\n")
