"""kDP queries, batches, and the query sets used to tag shared traversal."""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field

from .exceptions import QuerySetWidthError, UsageError
from .graph import Graph

__all__ = ["Query", "QuerySet", "Batch"]


class QuerySet:
    """A fixed-width bit vector over query ids.

    Bit ``i`` is set when query ``i`` is a member. The width is fixed when
    the batch is created, and combining sets of different widths raises
    `~batchkdp.exceptions.QuerySetWidthError`. Instances are immutable
    values; the operators return new sets.
    """

    __slots__ = ("_bits", "_width")

    def __init__(self, width: int, bits: int = 0) -> None:
        if bits >> width:
            raise UsageError(
                f"Query set bits exceed width {width}: {bits:#x}"
            )
        self._width = width
        self._bits = bits

    @classmethod
    def _new(cls, width: int, bits: int) -> QuerySet:
        qs = object.__new__(cls)
        qs._width = width
        qs._bits = bits
        return qs

    @classmethod
    def of(cls, width: int, ids: Iterable[int]) -> QuerySet:
        bits = 0
        for i in ids:
            if not 0 <= i < width:
                raise UsageError(f"Query id {i} outside [0, {width})")
            bits |= 1 << i
        return cls(width, bits)

    @classmethod
    def full(cls, width: int) -> QuerySet:
        return cls(width, (1 << width) - 1)

    @property
    def width(self) -> int:
        return self._width

    @property
    def bits(self) -> int:
        return self._bits

    @property
    def words(self) -> int:
        """Number of 64-bit machine words spanned by the set."""
        return max(1, (self._width + 63) // 64)

    def _check(self, other: QuerySet) -> None:
        if other._width != self._width:
            raise QuerySetWidthError(self._width, other._width)

    def union(self, other: QuerySet) -> QuerySet:
        self._check(other)
        return QuerySet._new(self._width, self._bits | other._bits)

    def intersect(self, other: QuerySet) -> QuerySet:
        self._check(other)
        return QuerySet._new(self._width, self._bits & other._bits)

    def subtract(self, other: QuerySet) -> QuerySet:
        self._check(other)
        return QuerySet._new(self._width, self._bits & ~other._bits)

    __or__ = union
    __and__ = intersect
    __sub__ = subtract

    def is_empty(self) -> bool:
        return self._bits == 0

    def issubset(self, other: QuerySet) -> bool:
        self._check(other)
        return self._bits & ~other._bits == 0

    def first(self) -> int:
        """Lowest member id; the set must not be empty."""
        if not self._bits:
            raise UsageError("first() of an empty query set")
        return (self._bits & -self._bits).bit_length() - 1

    def __bool__(self) -> bool:
        return self._bits != 0

    def __iter__(self) -> Iterator[int]:
        bits = self._bits
        while bits:
            low = bits & -bits
            yield low.bit_length() - 1
            bits ^= low

    def __len__(self) -> int:
        return self._bits.bit_count()

    def __contains__(self, i: object) -> bool:
        return isinstance(i, int) and 0 <= i < self._width and bool(
            self._bits >> i & 1
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QuerySet):
            return NotImplemented
        return self._width == other._width and self._bits == other._bits

    def __hash__(self) -> int:
        return hash((self._width, self._bits))

    def __repr__(self) -> str:
        return f"QuerySet({{{', '.join(str(i) for i in self)}}})"


@dataclass(frozen=True, slots=True)
class Query:
    """A kDP query: find disjoint paths from ``s`` to ``t``."""

    id: int

    s: int

    t: int


@dataclass(frozen=True)
class Batch:
    """A batch of kDP queries answered together with a common ``k``.

    Query ids are dense, unique, and equal to the query's position.
    Duplicate ``(s, t)`` pairs are distinct queries.
    """

    queries: tuple[Query, ...]

    k: int

    empty: QuerySet = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.k < 1:
            raise UsageError(f"k must be at least 1, got {self.k}")
        for i, q in enumerate(self.queries):
            if q.id != i:
                raise UsageError(
                    f"Query ids must be dense; position {i} has id {q.id}"
                )
            if q.s == q.t:
                raise UsageError(f"Query {q.id} has s == t == {q.s}")
        object.__setattr__(self, "empty", QuerySet(len(self.queries)))

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]], k: int) -> Batch:
        return cls(
            tuple(Query(i, s, t) for i, (s, t) in enumerate(pairs)), k
        )

    @property
    def width(self) -> int:
        return len(self.queries)

    def __len__(self) -> int:
        return len(self.queries)

    def __iter__(self) -> Iterator[Query]:
        return iter(self.queries)

    def __getitem__(self, i: int) -> Query:
        return self.queries[i]

    def queryset(self, ids: Iterable[int]) -> QuerySet:
        return QuerySet.of(self.width, ids)

    def all(self) -> QuerySet:
        return QuerySet.full(self.width)

    def validate(self, g: Graph) -> None:
        """Check that every endpoint is a vertex of ``g``."""
        for q in self.queries:
            for v in (q.s, q.t):
                if not 0 <= v < g.n:
                    raise UsageError(
                        f"Query {q.id} endpoint {v} is not a vertex of a "
                        f"graph with {g.n} vertices"
                    )

    def prefix(self, size: int) -> Batch:
        """The first ``size`` queries as a batch of their own."""
        return Batch(self.queries[:size], self.k)

    def with_k(self, k: int) -> Batch:
        return Batch(self.queries, k)

    def pairs(self) -> list[tuple[int, int]]:
        return [(q.s, q.t) for q in self.queries]

    def partition(self, shards: int) -> list[tuple[Batch, list[int]]]:
        """Split into at most ``shards`` renumbered sub-batches.

        Returns each sub-batch with the original ids of its queries, in
        the sub-batch's order. Queries are dealt round-robin.
        """
        if shards < 1:
            raise UsageError(f"shards must be at least 1, got {shards}")
        groups: list[list[int]] = [[] for _ in range(shards)]
        for q in self.queries:
            groups[q.id % shards].append(q.id)
        return [
            (
                Batch.from_pairs(
                    ((self.queries[i].s, self.queries[i].t) for i in ids),
                    self.k,
                ),
                ids,
            )
            for ids in groups
            if ids
        ]
