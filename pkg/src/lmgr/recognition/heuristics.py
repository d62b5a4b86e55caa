"""Landmark-based goal scores, computed as exact rationals."""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from typing import TYPE_CHECKING

from lmgr.landmarks.base import Category

if TYPE_CHECKING:
    from collections.abc import Iterable, Mapping, Sequence

    from lmgr.landmarks.base import Landmark, LandmarkSet
    from lmgr.recognition.recognizer import RecognitionConfig

__all__ = [
    'effective_landmarks',
    'goal_completion_heuristic',
    'landmark_uniqueness',
    'uniqueness_weights',
    'uniqueness_heuristic',
    'HEURISTICS',
]


def effective_landmarks(
    landmarks: LandmarkSet, cfg: RecognitionConfig
) -> LandmarkSet:
    """Drop the initial-state landmarks unless `cfg` includes them."""
    if cfg.include_initial_state_landmarks:
        return landmarks
    return landmarks.without(Category.INITIAL_STATE)


def _empty_score(goal_satisfied: bool) -> Fraction:
    # no landmark evidence is possible: only a goal already holding counts
    return Fraction(1) if goal_satisfied else Fraction(0)


def goal_completion_heuristic(
    achieved: Iterable[Landmark],
    effective: LandmarkSet,
    goal_satisfied: bool = False,
) -> Fraction:
    """Fraction of the effective landmarks that were achieved.

    Parameters
    ----------
    achieved : iterable of Landmark
        Achieved landmarks, a subset of `effective`.
    effective : LandmarkSet
        Effective landmarks of the goal.
    goal_satisfied : bool, optional
        Whether the goal holds in the initial state; decides the score when
        `effective` is empty. The default is False.

    Returns
    -------
    Fraction
        ``|achieved| / |effective|``.
    """
    achieved = frozenset(achieved)
    if not achieved <= frozenset(effective):
        raise ValueError('achieved landmarks must be effective landmarks')
    if len(effective) == 0:
        return _empty_score(goal_satisfied)
    return Fraction(len(achieved), len(effective))


def landmark_uniqueness(
    landmark: Landmark, all_effective: Sequence[LandmarkSet]
) -> Fraction:
    """Inverse number of goals whose landmarks contain `landmark`."""
    n = sum(landmark in lms for lms in all_effective)
    if n == 0:
        raise ValueError(f'landmark {landmark} is not a landmark of any goal')
    return Fraction(1, n)


def uniqueness_weights(
    all_effective: Sequence[LandmarkSet],
) -> dict[Landmark, Fraction]:
    """Uniqueness of every landmark occurring in `all_effective`."""
    freq = Counter(lm for lms in all_effective for lm in lms)
    return {lm: Fraction(1, n) for lm, n in freq.items()}


def uniqueness_heuristic(
    achieved: Iterable[Landmark],
    effective: LandmarkSet,
    all_effective: Sequence[LandmarkSet],
    goal_satisfied: bool = False,
    weights: Mapping[Landmark, Fraction] | None = None,
) -> Fraction:
    """Uniqueness-weighted fraction of achieved landmarks.

    Parameters
    ----------
    achieved : iterable of Landmark
        Achieved landmarks, a subset of `effective`.
    effective : LandmarkSet
        Effective landmarks of the goal.
    all_effective : sequence of LandmarkSet
        Effective landmarks of every candidate goal.
    goal_satisfied : bool, optional
        Decides the score when `effective` is empty. The default is False.
    weights : mapping, optional
        Precomputed :func:`uniqueness_weights` of `all_effective`.

    Returns
    -------
    Fraction
        Sum of the uniqueness of the achieved landmarks over the sum of the
        uniqueness of the effective landmarks.
    """
    achieved = frozenset(achieved)
    if not achieved <= frozenset(effective):
        raise ValueError('achieved landmarks must be effective landmarks')
    if len(effective) == 0:
        return _empty_score(goal_satisfied)
    if weights is None:
        weights = uniqueness_weights(all_effective)
    num = sum((weights[lm] for lm in achieved), Fraction(0))
    den = sum((weights[lm] for lm in effective), Fraction(0))
    return num / den


HEURISTICS = ('completion', 'uniqueness')
