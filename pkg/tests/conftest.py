"""Test fixtures for batchkdp tests."""

from __future__ import annotations

import os
from collections.abc import Callable
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from batchkdp.graph import Graph

settings.register_profile(
    "ci",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("dev", max_examples=20, deadline=None)
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "dev"))


def pytest_addoption(parser: pytest.Parser) -> None:
    parser.addoption(
        "--run-slow", action="store_true", help="Run tests marked slow."
    )


def pytest_collection_modifyitems(
    config: pytest.Config, items: list[pytest.Item]
) -> None:
    if config.getoption("--run-slow"):
        return
    skip = pytest.mark.skip(reason="needs --run-slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


DIAMOND_EDGES = [(0, 1), (0, 2), (1, 3), (2, 3)]

CROSSING_EDGES = [(0, 1), (1, 2), (2, 5), (0, 3), (3, 2), (1, 4), (4, 5)]

# vertices a..h as 0..7; queries run a -> h
EIGHT_EDGES = [
    (0, 1),
    (0, 4),
    (0, 6),
    (1, 2),
    (1, 4),
    (2, 3),
    (2, 7),
    (3, 7),
    (4, 3),
    (4, 5),
    (5, 7),
    (6, 3),
]


# s=0 p=1 u=2 m=3 v=4 w=5 t=6 x=7 z=8 y=9; 4 -> 8 -> 2 closes a loop back
# onto the long path
LOOP_EDGES = [
    (0, 1),
    (1, 2),
    (2, 3),
    (3, 4),
    (4, 5),
    (5, 6),
    (0, 7),
    (7, 5),
    (4, 8),
    (8, 2),
    (1, 9),
    (9, 6),
]

@pytest.fixture
def diamond() -> Graph:
    """0 -> {1, 2} -> 3."""
    return Graph.from_edges(4, DIAMOND_EDGES)


@pytest.fixture
def crossing() -> Graph:
    """Two disjoint 0 -> 5 paths that a first shortest path crosses."""
    return Graph.from_edges(6, CROSSING_EDGES)


@pytest.fixture
def eight() -> Graph:
    """Eight vertices; a -> h has three disjoint paths."""
    return Graph.from_edges(8, EIGHT_EDGES)


@pytest.fixture
def path_graph() -> Graph:
    """0 -> 1 -> 2."""
    return Graph.from_edges(3, [(0, 1), (1, 2)])


@pytest.fixture
def write_file(tmp_path: Path) -> Callable[[str, str], Path]:
    """Write text to a file under ``tmp_path`` and return its path."""

    def _write(name: str, text: str) -> Path:
        path = tmp_path / name
        path.write_text(text)
        return path

    return _write


@pytest.fixture
def diamond_file(write_file: Callable[[str, str], Path]) -> Path:
    return write_file(
        "diamond.txt", "".join(f"{u} {v}\n" for u, v in DIAMOND_EDGES)
    )


@pytest.fixture
def crossing_file(write_file: Callable[[str, str], Path]) -> Path:
    return write_file(
        "crossing.txt", "".join(f"{u} {v}\n" for u, v in CROSSING_EDGES)
    )


@pytest.fixture
def loop_graph() -> Graph:
    return Graph.from_edges(10, LOOP_EDGES)
