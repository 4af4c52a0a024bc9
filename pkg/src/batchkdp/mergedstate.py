"""The merged split-graph, represented implicitly by per-query result sets.

Every query's individual split-graph is derived on demand from the
original graph and a handful of query-set maps:

``nexthops[u, v]``
    Queries whose current path set contains edge ``u -> v``.
``prehops[u, v]``
    Queries for which ``v`` is ``u``'s prehop, i.e. path edge ``v -> u``.
``is_pinner[v]``, ``is_s[v]``, ``is_t[v]``
    Queries for which ``v`` is an intermediate path vertex, the source, or
    the target.

Neighbor queries answer, for a split vertex and a set of queries, which
split vertices each query reaches in one step of its own split-graph.
"""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Iterator, Sequence

from .exceptions import InternalConsistencyError
from .graph import Graph
from .queries import Batch, Query, QuerySet

__all__ = [
    "NeighborAnswer",
    "ResultState",
    "init_state",
    "get_out_neighbors",
    "get_in_neighbors",
    "apply_augmenting_path",
    "extract_paths",
]

NeighborAnswer = list[tuple[int, QuerySet]]
"""``(split vertex, query subset)`` entries in ascending split id order.

Entries with empty query sets are omitted.
"""


class ResultState:
    """Current result sets of every query in a batch.

    Per-edge maps are sparse; a missing key is an empty set and keys whose
    sets become empty are deleted. Per-vertex sets are also sparse.

    Use `init_state` to create one.
    """

    def __init__(self, graph: Graph, batch: Batch) -> None:
        self.graph = graph
        self.batch = batch
        self.empty = batch.empty
        self.nexthops: dict[tuple[int, int], QuerySet] = {}
        self.prehops: dict[tuple[int, int], QuerySet] = {}
        self.is_pinner: dict[int, QuerySet] = {}
        self.is_s: dict[int, QuerySet] = {}
        self.is_t: dict[int, QuerySet] = {}
        # vertex -> vertices with a nonempty nexthops / prehops entry
        self.nexthop_index: defaultdict[int, set[int]] = defaultdict(set)
        self.prehop_index: defaultdict[int, set[int]] = defaultdict(set)

    def pinner(self, v: int) -> QuerySet:
        return self.is_pinner.get(v, self.empty)

    def sources(self, v: int) -> QuerySet:
        return self.is_s.get(v, self.empty)

    def targets(self, v: int) -> QuerySet:
        return self.is_t.get(v, self.empty)

    def nexthop(self, u: int, v: int) -> QuerySet:
        return self.nexthops.get((u, v), self.empty)

    def prehop(self, u: int, v: int) -> QuerySet:
        return self.prehops.get((u, v), self.empty)

    def nexthops_of(self, v: int) -> list[int]:
        """Ascending vertices ``u`` with a nonempty ``nexthops[v, u]``."""
        found = self.nexthop_index.get(v)
        return sorted(found) if found else []

    def prehops_of(self, v: int) -> list[int]:
        """Ascending vertices ``u`` with a nonempty ``prehops[v, u]``."""
        found = self.prehop_index.get(v)
        return sorted(found) if found else []

    def path_edges(self, q: int) -> list[tuple[int, int]]:
        """Ascending path edges ``E_q`` recorded for query ``q``."""
        return sorted(e for e, qs in self.nexthops.items() if q in qs)

    def _set_edge(
        self,
        table: dict[tuple[int, int], QuerySet],
        index: defaultdict[int, set[int]],
        u: int,
        v: int,
        value: QuerySet,
    ) -> None:
        if value:
            table[(u, v)] = value
            index[u].add(v)
        elif (u, v) in table:
            del table[(u, v)]
            index[u].discard(v)
            if not index[u]:
                del index[u]

    def set_nexthop(self, u: int, v: int, value: QuerySet) -> None:
        self._set_edge(self.nexthops, self.nexthop_index, u, v, value)

    def set_prehop(self, u: int, v: int, value: QuerySet) -> None:
        self._set_edge(self.prehops, self.prehop_index, u, v, value)

    def refresh_pinner(self, v: int) -> None:
        """Recompute ``is_pinner[v]`` from the recorded nexthops."""
        members = self.empty
        for u in self.nexthop_index.get(v, ()):
            members = members | self.nexthops[(v, u)]
        members = members - self.sources(v) - self.targets(v)
        if members:
            self.is_pinner[v] = members
        else:
            self.is_pinner.pop(v, None)


def init_state(batch: Batch, g: Graph) -> ResultState:
    """Create the result state of a batch with no paths found yet."""
    st = ResultState(g, batch)
    for q in batch:
        bit = batch.queryset((q.id,))
        st.is_s[q.s] = st.sources(q.s) | bit
        st.is_t[q.t] = st.targets(q.t) | bit
    return st


def _collect(entries: dict[int, QuerySet], u: int, qs: QuerySet) -> None:
    if qs:
        prior = entries.get(u)
        entries[u] = qs if prior is None else prior | qs


def _sorted_answer(entries: dict[int, QuerySet]) -> NeighborAnswer:
    return sorted(entries.items())


def get_out_neighbors(
    v: int, B: QuerySet, g: Graph, st: ResultState
) -> NeighborAnswer:
    """Out-neighbors of split vertex ``v`` for each query in ``B``.

    An in-copy leads back along reversed path edges to its prehops. A
    plain id (the vertex itself, or its out-copy when it is P-inner)
    follows original out-edges that are not path edges, entering the
    in-copy of P-inner targets, plus the internal edge to its own in-copy.
    A query's target additionally leads back along its reversed path
    edges.
    """
    n = g.n
    entries: dict[int, QuerySet] = {}
    if v >= n:
        x = v - n
        live = B & st.pinner(x)
        if not live:
            return []
        for u in st.prehops_of(x):
            _collect(entries, u, live & st.prehops[(x, u)])
        return _sorted_answer(entries)

    x = v
    nexthops = st.nexthops
    is_pinner = st.is_pinner
    empty = st.empty
    for u in g.out_neighbors(x):
        have = B - nexthops.get((x, u), empty)
        if not have:
            continue
        pin = is_pinner.get(u)
        if pin is None:
            _collect(entries, u, have)
        else:
            _collect(entries, u + n, have & pin)
            _collect(entries, u, have - pin)
    _collect(entries, x + n, B & st.pinner(x))

    at_target = B & st.targets(x)
    if at_target:
        for u in st.prehops_of(x):
            _collect(entries, u, at_target & st.prehops[(x, u)])
    return _sorted_answer(entries)


def get_in_neighbors(
    v: int, B: QuerySet, g: Graph, st: ResultState
) -> NeighborAnswer:
    """In-neighbors of split vertex ``v`` for each query in ``B``.

    Mirror of `get_out_neighbors`. An in-copy is entered by original
    in-edges that are not path edges and by the internal edge from its
    out-copy. A plain id that is P-inner for a query is that query's
    out-copy, entered only by the reversed path edge from its nexthop; for
    other queries it is entered by original in-edges that are not path
    edges, and a query's source also by its reversed path edges.
    """
    n = g.n
    entries: dict[int, QuerySet] = {}
    prehops = st.prehops
    empty = st.empty

    if v >= n:
        x = v - n
        live = B & st.pinner(x)
        if not live:
            return []
        for u in g.in_neighbors(x):
            _collect(entries, u, live - prehops.get((x, u), empty))
        _collect(entries, x, live)
        return _sorted_answer(entries)

    x = v
    pin_x = st.pinner(x)
    plain = B - pin_x
    if plain:
        for u in g.in_neighbors(x):
            _collect(entries, u, plain - prehops.get((x, u), empty))

    reversed_from = (B & pin_x) | (plain & st.sources(x))
    if reversed_from:
        for u in st.nexthops_of(x):
            via = reversed_from & st.nexthops[(x, u)]
            if not via:
                continue
            pin = st.pinner(u)
            _collect(entries, u + n, via & pin)
            _collect(entries, u, via - pin)
    return _sorted_answer(entries)


def _check_path(
    path: Sequence[int], B: QuerySet, st: ResultState, batch: Batch
) -> None:
    g = st.graph
    if not path:
        raise InternalConsistencyError("Augmenting path is empty")
    for qid in B:
        q = batch[qid]
        if path[0] != q.s or path[-1] != q.t:
            raise InternalConsistencyError(
                f"Augmenting path {g.format_split(path[0])} -> ... -> "
                f"{g.format_split(path[-1])} does not join s={q.s} and "
                f"t={q.t} of query {qid}"
            )
    for x, y in zip(path, path[1:]):
        reached = dict(get_out_neighbors(x, B, g, st)).get(y, st.empty)
        missing = B - reached
        if missing:
            raise InternalConsistencyError(
                f"Step {g.format_split(x)} -> {g.format_split(y)} is not a "
                f"split-graph edge for queries {sorted(missing)}"
            )


def apply_augmenting_path(
    path: Sequence[int],
    B: QuerySet,
    st: ResultState,
    batch: Batch,
) -> ResultState:
    """Fold an augmenting split-space path into the result sets of ``B``.

    Traversing a reversed path edge cancels that edge; every other step
    records a new path edge. Steps between the two copies of one vertex
    carry no edge. The state is updated in place and returned.

    Raises
    ------
    batchkdp.exceptions.InternalConsistencyError
        If the path is not a valid augmenting path for every query in
        ``B``.
    """
    _check_path(path, B, st, batch)
    g = st.graph
    touched: set[int] = set()
    for x, y in zip(path, path[1:]):
        u = g.proj(x)
        v = g.proj(y)
        if u == v:
            continue
        cancel = st.prehop(u, v) & B
        st.set_prehop(u, v, st.prehop(u, v) - cancel)
        st.set_prehop(v, u, st.prehop(v, u) | (B - cancel))
        cancel_next = st.nexthop(v, u) & B
        st.set_nexthop(v, u, st.nexthop(v, u) - cancel_next)
        st.set_nexthop(u, v, st.nexthop(u, v) | (B - cancel_next))
        touched.add(u)
        touched.add(v)
    for qid in B:
        touched |= _drop_cycles(batch[qid], st, touched)
    for w in touched:
        st.refresh_pinner(w)
    return st


def _next_of(q: Query, v: int, st: ResultState) -> list[int]:
    return [u for u in st.nexthops_of(v) if q.id in st.nexthops[(v, u)]]


def _drop_cycles(q: Query, st: ResultState, candidates: set[int]) -> set[int]:
    """Remove path edges of ``q`` that form cycles detached from ``s``.

    An augmenting path can close a loop through an original edge that
    points back along an existing path. The loop carries no ``s -> t``
    path, so its edges are dropped. Returns the vertices whose edges were
    removed.
    """
    on_chain = {q.s, q.t}
    for first in _next_of(q, q.s, st):
        current = first
        while current not in on_chain:
            on_chain.add(current)
            nxt = _next_of(q, current, st)
            if len(nxt) != 1:
                raise InternalConsistencyError(
                    f"Query {q.id} has {len(nxt)} nexthops at vertex "
                    f"{current}"
                )
            current = nxt[0]
    bit = st.batch.queryset((q.id,))
    removed: set[int] = set()
    for w in sorted(candidates - on_chain):
        current = w
        while True:
            nxt = _next_of(q, current, st)
            if not nxt:
                break
            u = nxt[0]
            st.set_nexthop(current, u, st.nexthop(current, u) - bit)
            st.set_prehop(u, current, st.prehop(u, current) - bit)
            removed.update((current, u))
            current = u
    return removed


def _follow(q: Query, first: int, st: ResultState) -> Iterator[int]:
    yield q.s
    current = first
    limit = st.graph.n
    steps = 0
    while current != q.t:
        yield current
        steps += 1
        if steps > limit:
            raise InternalConsistencyError(
                f"Path of query {q.id} through {first} does not reach t"
            )
        nxt = _next_of(q, current, st)
        if len(nxt) != 1:
            raise InternalConsistencyError(
                f"Query {q.id} has {len(nxt)} nexthops at vertex {current}"
            )
        current = nxt[0]
    yield q.t


def extract_paths(q: Query, k: int, st: ResultState) -> list[list[int]]:
    """Read the recorded disjoint paths of ``q`` in original vertex ids.

    Paths are ordered by their first hop.

    Raises
    ------
    batchkdp.exceptions.InternalConsistencyError
        If a path chain is broken or more than ``k`` paths are recorded.
    """
    firsts = _next_of(q, q.s, st)
    if len(firsts) > k:
        raise InternalConsistencyError(
            f"Query {q.id} records {len(firsts)} paths, more than k={k}"
        )
    return [list(_follow(q, u, st)) for u in firsts]
