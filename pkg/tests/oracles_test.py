"""Tests for the correctness oracles."""

from __future__ import annotations

import pytest

from batchkdp.config import config
from batchkdp.exceptions import OracleGuardError
from batchkdp.graph import Graph
from batchkdp.mergedstate import apply_augmenting_path, init_state
from batchkdp.oracles import (
    check_state,
    exhaustive_disjoint_count,
    max_disjoint_count,
    max_disjoint_paths,
    neighbor_oracle_check,
    oracle_query,
    verify_disjoint,
)
from batchkdp.queries import Batch, Query
from batchkdp.synthetic import random_dag


def test_verify_disjoint_ok(diamond: Graph) -> None:
    assert verify_disjoint(diamond, 0, 3, [[0, 1, 3], [0, 2, 3]]).ok
    assert verify_disjoint(diamond, 0, 3, []).ok


@pytest.mark.parametrize(
    ("paths", "finding"),
    [
        ([[0, 1, 3], [0, 1, 3]], "shared inner vertex 1"),
        ([[0, 1, 3], [0, 1, 3]], "duplicate path"),
        ([[0, 2], [0, 1, 3]], "wrong endpoints"),
        ([[0, 3]], "missing edge 0->3"),
        ([[0, 1, 0, 1, 3]], "not simple"),
    ],
)
def test_verify_disjoint_findings(
    diamond: Graph, paths: list[list[int]], finding: str
) -> None:
    report = verify_disjoint(diamond, 0, 3, paths)
    assert not report.ok
    assert any(finding in v for v in report.violations)


def test_verify_shared_inner_vertex(crossing: Graph) -> None:
    report = verify_disjoint(crossing, 0, 5, [[0, 1, 2, 5], [0, 3, 2, 5]])
    assert report.violations == [
        "path 1 [0, 3, 2, 5]: shared inner vertex 2 with path 0"
    ]


def test_max_disjoint_count(
    diamond: Graph, crossing: Graph, eight: Graph, path_graph: Graph
) -> None:
    assert max_disjoint_count(diamond, 0, 3, 5) == 2
    assert max_disjoint_count(diamond, 0, 3, 1) == 1
    assert max_disjoint_count(crossing, 0, 5, 5) == 2
    assert max_disjoint_count(crossing, 1, 5, 5) == 2
    assert max_disjoint_count(eight, 0, 7, 5) == 3
    assert max_disjoint_count(path_graph, 0, 2, 5) == 1
    assert max_disjoint_count(path_graph, 2, 0, 5) == 0


def test_isolated_endpoints() -> None:
    g = Graph.from_edges(3, [(1, 2)])
    assert max_disjoint_count(g, 0, 2, 2) == 0
    assert max_disjoint_count(g, 2, 1, 2) == 0
    assert max_disjoint_paths(g, 0, 2, 2) == []
    result = oracle_query(g, Query(0, 0, 2), 2)
    assert result.found == 0
    assert result.paths == []


def test_direct_edge_and_back_edge() -> None:
    g = Graph.from_edges(3, [(0, 2), (2, 0), (0, 1), (1, 2)])
    assert max_disjoint_count(g, 0, 2, 5) == 2
    assert max_disjoint_paths(g, 0, 2, 5) == [[0, 1, 2], [0, 2]]


def test_max_disjoint_paths_are_disjoint(eight: Graph) -> None:
    paths = max_disjoint_paths(eight, 0, 7, 5)
    assert len(paths) == 3
    assert verify_disjoint(eight, 0, 7, paths).ok


def test_oracle_query(crossing: Graph) -> None:
    result = oracle_query(crossing, Query(3, 0, 5), 2)
    assert result.query_id == 3
    assert result.found == 2
    assert verify_disjoint(crossing, 0, 5, result.paths).ok


def test_guard(diamond: Graph, monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setattr(config, "oracle_max_vertices", 3)
    with pytest.raises(OracleGuardError):
        max_disjoint_count(diamond, 0, 3, 2)


def test_removing_an_edge_never_helps(eight: Graph) -> None:
    full = max_disjoint_count(eight, 0, 7, 5)
    for u, v in eight.edges():
        assert max_disjoint_count(eight.without_edge(u, v), 0, 7, 5) <= full


@pytest.mark.parametrize("seed", range(5))
def test_exhaustive_agrees_on_dags(seed: int) -> None:
    g = random_dag(7, 0.4, seed)
    for s in range(g.n):
        for t in range(g.n):
            if s == t:
                continue
            exact = exhaustive_disjoint_count(g, s, t, limit=40)
            if exact is not None:
                assert exact == max_disjoint_count(g, s, t, g.n)


def test_exhaustive_limit(eight: Graph) -> None:
    assert exhaustive_disjoint_count(eight, 0, 7) == 3
    assert exhaustive_disjoint_count(eight, 0, 7, limit=2) is None


def test_check_state(crossing: Graph) -> None:
    batch = Batch.from_pairs([(0, 5), (1, 5)], 2)
    st = init_state(batch, crossing)
    assert check_state(st, batch).ok
    apply_augmenting_path([0, 1, 2, 5], batch.queryset([0]), st, batch)
    assert check_state(st, batch).ok

    st.set_prehop(2, 1, batch.empty)
    report = check_state(st, batch)
    assert any("nexthops[1,2]" in v for v in report.violations)


def test_check_state_detects_branching(diamond: Graph) -> None:
    batch = Batch.from_pairs([(0, 3)], 2)
    st = init_state(batch, diamond)
    apply_augmenting_path([0, 1, 3], batch.all(), st, batch)
    st.set_nexthop(1, 0, batch.all())
    st.set_prehop(0, 1, batch.all())
    assert not check_state(st, batch).ok


def test_neighbor_check(crossing: Graph) -> None:
    batch = Batch.from_pairs([(0, 5), (1, 5), (0, 5)], 2)
    st = init_state(batch, crossing)
    assert neighbor_oracle_check(crossing, st, batch, 200, 1).ok
    apply_augmenting_path([0, 1, 2, 5], batch.queryset([0, 2]), st, batch)
    assert neighbor_oracle_check(crossing, st, batch, 200, 2).ok
    apply_augmenting_path(
        [0, 3, 8, 1, 4, 5], batch.queryset([0, 2]), st, batch
    )
    assert neighbor_oracle_check(crossing, st, batch, 200, 3).ok


def test_neighbor_check_detects_corruption(crossing: Graph) -> None:
    batch = Batch.from_pairs([(0, 5)], 2)
    st = init_state(batch, crossing)
    apply_augmenting_path([0, 1, 2, 5], batch.all(), st, batch)
    # vertex 1 stops being split although its path edges remain
    del st.is_pinner[1]
    report = neighbor_oracle_check(crossing, st, batch, 100, 0)
    assert not report.ok
