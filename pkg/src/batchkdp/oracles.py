"""Independent correctness oracles and validators.

Nothing here shares code with the engines or the merged state: the flow
oracle splits vertices on its own node encoding, and the neighbor check
compares merged answers against explicitly built split-graphs.
"""

from __future__ import annotations

import time
from collections.abc import Sequence

import numpy as np

from .config import config
from .domain import QueryResult, VerifyReport
from .engines.splitgraph import build_explicit_split_graph
from .exceptions import InternalConsistencyError, OracleGuardError
from .graph import Graph
from .mergedstate import (
    ResultState,
    extract_paths,
    get_in_neighbors,
    get_out_neighbors,
)
from .queries import Batch, Query, QuerySet

__all__ = [
    "verify_disjoint",
    "max_disjoint_count",
    "max_disjoint_paths",
    "oracle_query",
    "exhaustive_disjoint_count",
    "check_state",
    "neighbor_oracle_check",
]


def verify_disjoint(
    g: Graph, s: int, t: int, paths: Sequence[Sequence[int]]
) -> VerifyReport:
    """Check that ``paths`` are simple, pairwise disjoint ``s -> t`` paths
    of ``g``.
    """
    violations: list[str] = []
    owner: dict[int, int] = {}
    seen_paths: set[tuple[int, ...]] = set()
    for i, p in enumerate(paths):
        label = f"path {i} {list(p)}"
        if len(p) < 2 or p[0] != s or p[-1] != t:
            violations.append(f"{label}: wrong endpoints, expected {s}->{t}")
            continue
        if len(set(p)) != len(p):
            violations.append(f"{label}: not simple")
        for u, v in zip(p, p[1:]):
            if not g.has_edge(u, v):
                violations.append(f"{label}: missing edge {u}->{v}")
        key = tuple(p)
        if key in seen_paths:
            violations.append(f"{label}: duplicate path")
        seen_paths.add(key)
        for v in p[1:-1]:
            if v in owner and owner[v] != i:
                violations.append(
                    f"{label}: shared inner vertex {v} with path {owner[v]}"
                )
            owner.setdefault(v, i)
    return VerifyReport(violations=violations)


class _FlowNetwork:
    """Unit-capacity residual network over ``(vertex, side)`` nodes.

    Every vertex other than ``s`` and ``t`` becomes an ``"in"`` node and an
    ``"out"`` node joined by a unit arc, so each vertex carries at most one
    unit of flow.
    """

    def __init__(self, g: Graph, s: int, t: int) -> None:
        self.s = s
        self.t = t
        self.residual: dict[tuple[int, str], dict[tuple[int, str], int]] = {
            self.tail(s): {},
            self.head(t): {},
        }
        for v in range(g.n):
            if v not in (s, t):
                self._arc(self.head(v), self.tail(v))
        for u, v in g.edges():
            # edges into s or out of t never carry flow
            if v != s and u != t:
                self._arc(self.tail(u), self.head(v))

    def head(self, v: int) -> tuple[int, str]:
        """Node where edges into ``v`` arrive."""
        return (v, "out") if v in (self.s, self.t) else (v, "in")

    def tail(self, v: int) -> tuple[int, str]:
        """Node where edges out of ``v`` leave."""
        return (v, "out")

    def _arc(self, a: tuple[int, str], b: tuple[int, str]) -> None:
        self.residual.setdefault(a, {})
        self.residual.setdefault(b, {})
        self.residual[a][b] = self.residual[a].get(b, 0) + 1
        self.residual[b].setdefault(a, 0)

    def augment(self) -> bool:
        """Push one unit along any residual path found depth-first."""
        source = self.tail(self.s)
        sink = self.head(self.t)
        parent = {source: source}
        stack = [source]
        while stack:
            a = stack.pop()
            if a == sink:
                break
            for b, cap in self.residual[a].items():
                if cap > 0 and b not in parent:
                    parent[b] = a
                    stack.append(b)
        if sink not in parent:
            return False
        b = sink
        while b != source:
            a = parent[b]
            self.residual[a][b] -= 1
            self.residual[b][a] += 1
            b = a
        return True

    def flow_on(self, u: int, v: int) -> bool:
        """Whether edge ``u -> v`` carries flow."""
        return self.residual[self.head(v)].get(self.tail(u), 0) > 0


def _solve_flow(
    g: Graph, s: int, t: int, cap: int, deadline: float | None
) -> tuple[_FlowNetwork, int, bool]:
    if g.n > config.oracle_max_vertices:
        raise OracleGuardError(g.n, config.oracle_max_vertices)
    network = _FlowNetwork(g, s, t)
    flow = 0
    while flow < cap:
        if deadline is not None and time.monotonic() > deadline:
            return network, flow, True
        if not network.augment():
            break
        flow += 1
    return network, flow, False


def max_disjoint_count(g: Graph, s: int, t: int, cap: int) -> int:
    """Maximum number of vertex-disjoint ``s -> t`` paths, capped at
    ``cap``.

    Raises
    ------
    batchkdp.exceptions.OracleGuardError
        If the graph exceeds the configured oracle size.
    """
    _, flow, _ = _solve_flow(g, s, t, cap, None)
    return flow


def _flow_paths(g: Graph, network: _FlowNetwork) -> list[list[int]]:
    s, t = network.s, network.t
    paths = []
    for first in g.out_neighbors(s):
        if not network.flow_on(s, first):
            continue
        path = [s, first]
        while path[-1] != t:
            u = path[-1]
            nxt = [v for v in g.out_neighbors(u) if network.flow_on(u, v)]
            path.append(nxt[0])
        paths.append(path)
    return paths


def max_disjoint_paths(
    g: Graph, s: int, t: int, cap: int, *, deadline: float | None = None
) -> list[list[int]]:
    """Paths realising `max_disjoint_count`, ordered by first hop."""
    network, _, _ = _solve_flow(g, s, t, cap, deadline)
    return _flow_paths(g, network)


def oracle_query(
    g: Graph, q: Query, k: int, *, deadline: float | None = None
) -> QueryResult:
    """Answer a query with the flow oracle."""
    start = time.monotonic()
    network, _, timed_out = _solve_flow(g, q.s, q.t, k, deadline)
    paths = _flow_paths(g, network)
    return QueryResult(
        query_id=q.id,
        s=q.s,
        t=q.t,
        k=k,
        found=len(paths),
        paths=paths,
        elapsed=time.monotonic() - start,
        timed_out=timed_out,
    )


def _simple_paths(
    g: Graph, s: int, t: int, limit: int
) -> list[list[int]] | None:
    paths: list[list[int]] = []
    stack: list[tuple[int, list[int]]] = [(s, [s])]
    while stack:
        v, path = stack.pop()
        if v == t:
            paths.append(path)
            if len(paths) > limit:
                return None
            continue
        for u in g.out_neighbors(v):
            if u not in path:
                stack.append((u, path + [u]))
    return paths


def exhaustive_disjoint_count(
    g: Graph, s: int, t: int, limit: int | None = None
) -> int | None:
    """Largest pairwise disjoint subset of all simple ``s -> t`` paths.

    Returns None when there are more than ``limit`` simple paths, since
    the subset search grows factorially.
    """
    if limit is None:
        limit = config.exhaustive_path_limit
    paths = _simple_paths(g, s, t, limit)
    if paths is None:
        return None
    inners = [frozenset(p[1:-1]) for p in paths]
    best = 0

    def search(start: int, used: frozenset[int], size: int) -> None:
        nonlocal best
        best = max(best, size)
        for i in range(start, len(inners)):
            if not inners[i] & used:
                search(i + 1, used | inners[i], size + 1)

    search(0, frozenset(), 0)
    return best


def check_state(st: ResultState, batch: Batch) -> VerifyReport:
    """Check the structural invariants of a result state."""
    violations: list[str] = []
    for (u, v), qs in st.nexthops.items():
        mirror = st.prehop(v, u)
        if qs != mirror:
            violations.append(
                f"nexthops[{u},{v}]={qs} but prehops[{v},{u}]={mirror}"
            )
    for (u, v), qs in st.prehops.items():
        if st.nexthop(v, u) != qs:
            violations.append(f"prehops[{u},{v}]={qs} has no mirror")
    for v, qs in st.is_pinner.items():
        clash = qs & (st.sources(v) | st.targets(v))
        if clash:
            violations.append(f"vertex {v} is P-inner and s/t for {clash}")
    for q in batch:
        out_deg: dict[int, int] = {}
        in_deg: dict[int, int] = {}
        for u, v in st.path_edges(q.id):
            out_deg[u] = out_deg.get(u, 0) + 1
            in_deg[v] = in_deg.get(v, 0) + 1
        if in_deg.get(q.s, 0) or out_deg.get(q.t, 0):
            violations.append(f"query {q.id}: path edge enters s or leaves t")
        if out_deg.get(q.s, 0) != in_deg.get(q.t, 0):
            violations.append(f"query {q.id}: s out-degree != t in-degree")
        for v in set(out_deg) | set(in_deg):
            if v in (q.s, q.t):
                continue
            if out_deg.get(v, 0) != in_deg.get(v, 0) or out_deg.get(v, 0) > 1:
                violations.append(
                    f"query {q.id}: vertex {v} has in/out degree "
                    f"{in_deg.get(v, 0)}/{out_deg.get(v, 0)}"
                )
            if q.id not in st.pinner(v):
                violations.append(
                    f"query {q.id}: vertex {v} on a path but not P-inner"
                )
        for v, qs in st.is_pinner.items():
            if q.id in qs and v not in out_deg:
                violations.append(
                    f"query {q.id}: vertex {v} P-inner without a nexthop"
                )
        try:
            paths = extract_paths(q, batch.k, st)
        except InternalConsistencyError as exc:
            violations.append(f"query {q.id}: {exc}")
            continue
        covered = sum(len(p) - 1 for p in paths)
        if covered != len(st.path_edges(q.id)):
            violations.append(
                f"query {q.id}: path edges outside its s-t paths"
            )
        found = verify_disjoint(st.graph, q.s, q.t, paths)
        violations.extend(f"query {q.id}: {msg}" for msg in found.violations)
    return VerifyReport(violations=violations)


def _answer_by_query(
    answer: list[tuple[int, QuerySet]], qid: int
) -> list[int]:
    return sorted(u for u, qs in answer if qid in qs)


def neighbor_oracle_check(
    g: Graph, st: ResultState, batch: Batch, samples: int, seed: int
) -> VerifyReport:
    """Compare merged neighbor answers with explicit split-graphs.

    Samples ``samples`` random ``(v, B)`` probes, with ``B`` restricted to
    queries whose split-graph contains ``v``, and checks the out- and
    in-neighbors every query gets from the merged state against its own
    explicitly built split-graph. Structural invariants of the state are
    checked first.
    """
    report = check_state(st, batch)
    if not len(batch) or not g.n:
        return report
    explicit = {}
    for q in batch:
        try:
            paths = extract_paths(q, batch.k, st)
            explicit[q.id] = build_explicit_split_graph(g, paths, q.s, q.t)
        except Exception as exc:
            report.violations.append(
                f"query {q.id}: cannot build split-graph: {exc}"
            )
    if not report.ok:
        return report

    rng = np.random.default_rng(seed)
    violations: list[str] = []
    for _ in range(samples):
        v = int(rng.integers(0, 2 * g.n))
        members = [q.id for q in batch if explicit[q.id].has_vertex(v)]
        if not members:
            continue
        picks = rng.random(len(members)) < 0.5
        chosen = [qid for qid, pick in zip(members, picks) if pick]
        if not chosen:
            chosen = [members[int(rng.integers(0, len(members)))]]
        B = batch.queryset(chosen)
        out_answer = get_out_neighbors(v, B, g, st)
        in_answer = get_in_neighbors(v, B, g, st)
        for answer, label in ((out_answer, "out"), (in_answer, "in")):
            targets = [u for u, _ in answer]
            if targets != sorted(set(targets)):
                violations.append(
                    f"{label}-neighbors of {g.format_split(v)} are not "
                    f"unique and ascending: {targets}"
                )
            if any(not (qs - B).is_empty() or not qs for _, qs in answer):
                violations.append(
                    f"{label}-neighbors of {g.format_split(v)} carry "
                    f"queries outside B or empty sets"
                )
        for qid in chosen:
            sg = explicit[qid]
            expected_out = sg.out_neighbors(v)
            got_out = _answer_by_query(out_answer, qid)
            if got_out != expected_out:
                violations.append(
                    f"query {qid}: out-neighbors of {g.format_split(v)} "
                    f"are {got_out}, split-graph has {expected_out}"
                )
            expected_in = sg.in_neighbors(v)
            got_in = _answer_by_query(in_answer, qid)
            if got_in != expected_in:
                violations.append(
                    f"query {qid}: in-neighbors of {g.format_split(v)} "
                    f"are {got_in}, split-graph has {expected_in}"
                )
    return report.merge(VerifyReport(violations=violations))
