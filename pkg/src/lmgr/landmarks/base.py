"""Fact landmarks, their categories and per-goal landmark sets."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from collections.abc import Iterable, Iterator

    from lmgr.planning.strips import Fact
    from lmgr.util.typing import State

__all__ = ['Category', 'Landmark', 'LandmarkSet', 'classify']


class Category(Enum):
    """Landmark categories; they are mutually exclusive."""

    INITIAL_STATE = 'InitialState'
    GOAL = 'Goal'
    NON_TRIVIAL = 'NonTrivial'

    def __str__(self) -> str:
        return self.value


def classify(disjuncts: State, init: State, goal: State) -> Category:
    """Categorize a landmark.

    A landmark holding in `init` is an initial-state landmark even if it is
    also a goal fact. Otherwise a singleton goal fact is a goal landmark.
    """
    if not disjuncts.isdisjoint(init):
        return Category.INITIAL_STATE
    if len(disjuncts) == 1 and disjuncts <= goal:
        return Category.GOAL
    return Category.NON_TRIVIAL


@dataclass(frozen=True)
class Landmark:
    """A fact landmark: at least one of `disjuncts` holds along every plan.

    Two landmarks are equal iff their disjunct sets are equal.
    """

    disjuncts: frozenset[Fact]
    category: Category = field(default=Category.NON_TRIVIAL, compare=False)

    def __post_init__(self):
        if not self.disjuncts:
            raise ValueError('landmark must have at least one disjunct')
        object.__setattr__(self, 'disjuncts', frozenset(self.disjuncts))

    def __str__(self) -> str:
        return ' | '.join(map(str, self.sorted_disjuncts()))

    def sorted_disjuncts(self) -> tuple[Fact, ...]:
        return tuple(sorted(self.disjuncts))

    @property
    def is_disjunctive(self) -> bool:
        return len(self.disjuncts) > 1

    def holds_in(self, facts: State) -> bool:
        """Whether some disjunct is in `facts`."""
        return not self.disjuncts.isdisjoint(facts)


def _sort_key(lm: Landmark) -> tuple:
    return len(lm.disjuncts), lm.sorted_disjuncts()


class LandmarkSet:
    """The landmarks of one goal, as produced by one extractor.

    Parameters
    ----------
    goal : set of Fact
        The goal the landmarks belong to.
    landmarks : iterable of Landmark
        The landmarks; duplicates are merged.
    extractor : str
        Tag of the producing extractor, e.g. ``'ex'`` or ``'rhw'``.
    """

    def __init__(
        self,
        goal: Iterable[Fact],
        landmarks: Iterable[Landmark],
        extractor: str,
    ):
        self.goal = frozenset(goal)
        unique = {}
        for lm in landmarks:
            unique.setdefault(lm, lm)
        self._landmarks = tuple(sorted(unique, key=_sort_key))
        self._lookup = frozenset(self._landmarks)
        self.extractor = str(extractor)

    @classmethod
    def build(
        cls,
        init: State,
        goal: State,
        disjunct_sets: Iterable[Iterable[Fact]],
        extractor: str,
    ) -> LandmarkSet:
        """Build a set of classified landmarks from raw disjunct sets."""
        landmarks = []
        for d in disjunct_sets:
            d = frozenset(d)
            landmarks.append(Landmark(d, classify(d, init, goal)))
        return cls(goal, landmarks, extractor)

    def __repr__(self) -> str:
        counts = ', '.join(f'{k}={v}' for k, v in self.counts().items())
        return f'LandmarkSet(extractor={self.extractor!r}, {counts})'

    def __len__(self) -> int:
        return len(self._landmarks)

    def __iter__(self) -> Iterator[Landmark]:
        return iter(self._landmarks)

    def __contains__(self, item) -> bool:
        return item in self._lookup

    def __eq__(self, other) -> bool:
        if not isinstance(other, LandmarkSet):
            return NotImplemented
        return (
            self.goal == other.goal
            and self._lookup == other._lookup
            and self.extractor == other.extractor
        )

    def __hash__(self):
        return hash((self.goal, self._lookup, self.extractor))

    @property
    def landmarks(self) -> tuple[Landmark, ...]:
        """Landmarks sorted by size and then by disjuncts."""
        return self._landmarks

    def counts(self) -> dict[str, int]:
        """Number of landmarks per category."""
        counts = {str(c): 0 for c in Category}
        for lm in self._landmarks:
            counts[str(lm.category)] += 1
        return counts

    def singletons(self) -> frozenset[Fact]:
        """Facts of the singleton landmarks."""
        return frozenset(
            next(iter(lm.disjuncts))
            for lm in self._landmarks
            if not lm.is_disjunctive
        )

    def without(self, category: Category) -> LandmarkSet:
        """A copy without the landmarks of `category`."""
        kept = (lm for lm in self._landmarks if lm.category is not category)
        return LandmarkSet(self.goal, kept, self.extractor)

    def to_json_lines(self, goal_index: int) -> list[str]:
        """Serialize as one JSON object per landmark."""
        return [
            json.dumps(
                {
                    'goal_index': goal_index,
                    'disjuncts': list(map(str, lm.sorted_disjuncts())),
                    'category': str(lm.category),
                    'extractor': self.extractor,
                }
            )
            for lm in self._landmarks
        ]
