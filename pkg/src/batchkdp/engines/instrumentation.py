"""Per-level traversal counters for the shared engine."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Literal

from ..queries import QuerySet

__all__ = ["LevelStats", "TraversalStats", "LevelHook"]


@dataclass
class LevelStats:
    """Counters for one BFS level of one iteration."""

    iteration: int

    direction: Literal["forward", "backward"]

    level: int

    frontier: QuerySet
    """Union of the query sets expanded in this level."""

    vertices_expanded: int = 0
    """Queue entries expanded; each split vertex at most once per level."""

    query_expansions: int = 0
    """Sum of live queries over expanded entries; what independent
    searches would have expanded.
    """

    shared_vertices: int = 0
    """Expanded entries carrying two or more live queries."""

    words_ored: int = 0
    """Machine words touched by query set unions."""

    @property
    def share_ratio(self) -> float:
        if not self.vertices_expanded:
            return 0.0
        return self.shared_vertices / self.vertices_expanded


LevelHook = Callable[[LevelStats], None]


@dataclass
class TraversalStats:
    """All level counters of one batch execution."""

    levels: list[LevelStats] = field(default_factory=list)

    def record(self, stats: LevelStats) -> None:
        self.levels.append(stats)

    @property
    def share_ratios(self) -> list[float]:
        return [
            lv.share_ratio for lv in self.levels if lv.vertices_expanded
        ]

    @property
    def vertices_expanded(self) -> int:
        return sum(lv.vertices_expanded for lv in self.levels)

    @property
    def query_expansions(self) -> int:
        return sum(lv.query_expansions for lv in self.levels)

    @property
    def savings_ratio(self) -> float:
        if not self.query_expansions:
            return 0.0
        return 1.0 - self.vertices_expanded / self.query_expansions

    def iteration_ratios(self, iteration: int) -> list[float]:
        return [
            lv.share_ratio
            for lv in self.levels
            if lv.iteration == iteration and lv.vertices_expanded
        ]
