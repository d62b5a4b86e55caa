"""Landmark-based goal recognition."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, NamedTuple

from lmgr.landmarks.base import Category
from lmgr.landmarks.extract import (
    DEFAULT_DISJUNCT_CAP,
    EXTRACTORS,
    extract_landmarks,
)
from lmgr.recognition.heuristics import (
    HEURISTICS,
    effective_landmarks,
    goal_completion_heuristic,
    uniqueness_heuristic,
    uniqueness_weights,
)

if TYPE_CHECKING:
    from collections.abc import Sequence

    from lmgr.landmarks.base import LandmarkSet
    from lmgr.pddl.bundle import RecognitionBundle
    from lmgr.planning.strips import Action
    from lmgr.util.typing import AchievedMap, Goals, State

__all__ = [
    'RecognitionConfig',
    'GoalScore',
    'Recognition',
    'goal_landmarks',
    'compute_achieved_landmarks',
    'score_goals',
    'recognize',
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RecognitionConfig:
    """One recognizer variant.

    Parameters
    ----------
    extractor : str, optional
        Landmark extractor tag, one of ``'ex'``, ``'rhw'`` or ``'hm'``.
        The default is ``'ex'``.
    heuristic : str, optional
        ``'completion'`` or ``'uniqueness'``. The default is
        ``'completion'``.
    include_initial_state_landmarks : bool, optional
        Whether initial-state landmarks are kept, and counted as achieved
        before any observation. The default is False.
    """

    extractor: str = 'ex'
    heuristic: str = 'completion'
    include_initial_state_landmarks: bool = False

    def __post_init__(self):
        if self.extractor not in EXTRACTORS:
            supported = ', '.join(EXTRACTORS)
            raise ValueError(
                f'unknown extractor {self.extractor!r}, supported are: '
                f'{supported}'
            )
        if self.heuristic not in HEURISTICS:
            supported = ', '.join(HEURISTICS)
            raise ValueError(
                f'unknown heuristic {self.heuristic!r}, supported are: '
                f'{supported}'
            )
        object.__setattr__(
            self,
            'include_initial_state_landmarks',
            bool(self.include_initial_state_landmarks),
        )

    @property
    def label(self) -> str:
        """Short label such as ``EX`` or ``RHW-init``."""
        label = self.extractor.upper()
        if self.include_initial_state_landmarks:
            label += '-init'
        return label


class GoalScore(NamedTuple):
    """Score of one candidate goal."""

    goal_index: int
    """Index of the goal among the candidates."""

    score: Fraction
    """Heuristic value in [0, 1]."""

    achieved_count: int
    """Number of achieved effective landmarks."""

    total_count: int
    """Number of effective landmarks."""


class Recognition(NamedTuple):
    """Scores of every candidate goal and the recognized goals."""

    scores: tuple[GoalScore, ...]
    recognized: frozenset[int]


def goal_landmarks(
    bundle: RecognitionBundle,
    extractor: str = 'ex',
    disjunct_cap: int = DEFAULT_DISJUNCT_CAP,
) -> tuple[LandmarkSet, ...]:
    """Extract the landmarks of every candidate goal of `bundle`."""
    return tuple(
        extract_landmarks(bundle.problem, g, extractor, disjunct_cap)
        for g in bundle.goals
    )


def compute_achieved_landmarks(
    init: State,
    goals: Goals,
    observations: Sequence[Action],
    landmark_sets: Sequence[LandmarkSet],
    cfg: RecognitionConfig,
) -> AchievedMap:
    """Map every goal to the effective landmarks achieved by `observations`.

    A landmark is achieved when one of its facts is a precondition or an add
    effect of an observed action. If `cfg` includes initial-state
    landmarks, they count as achieved before any observation; otherwise
    they are ignored.

    Parameters
    ----------
    init : set of Fact
        The initial state.
    goals : sequence of set of Fact
        Candidate goals.
    observations : sequence of Action
        Observed actions in order.
    landmark_sets : sequence of LandmarkSet
        Landmarks of each goal, in the order of `goals`.
    cfg : RecognitionConfig
        The recognizer variant.

    Returns
    -------
    dict
        Achieved landmarks per goal index.
    """
    if len(goals) != len(landmark_sets):
        raise ValueError(
            f'got {len(landmark_sets)} landmark sets for {len(goals)} goals'
        )
    facts = [a.pre | a.add for a in observations]
    achieved_map = {}
    for i, lms in enumerate(landmark_sets):
        effective = effective_landmarks(lms, cfg)
        achieved = set()
        if cfg.include_initial_state_landmarks:
            achieved.update(
                lm
                for lm in effective
                if lm.category is Category.INITIAL_STATE
            )
        pending = [lm for lm in effective if lm not in achieved]
        for observed in facts:
            if not pending:
                break
            still = []
            for lm in pending:
                if lm.holds_in(observed):
                    achieved.add(lm)
                else:
                    still.append(lm)
            pending = still
        achieved_map[i] = frozenset(achieved)
        logger.debug(
            'goal %d: %d of %d landmarks achieved',
            i,
            len(achieved),
            len(effective),
        )
    return achieved_map


def score_goals(
    init: State,
    goals: Goals,
    observations: Sequence[Action],
    landmark_sets: Sequence[LandmarkSet],
    cfg: RecognitionConfig,
) -> tuple[GoalScore, ...]:
    """Score every candidate goal with the heuristic of `cfg`."""
    achieved_map = compute_achieved_landmarks(
        init, goals, observations, landmark_sets, cfg
    )
    effective = [effective_landmarks(lms, cfg) for lms in landmark_sets]
    weights = None
    if cfg.heuristic == 'uniqueness':
        weights = uniqueness_weights(effective)

    scores = []
    for i, g in enumerate(goals):
        achieved = achieved_map[i]
        satisfied = g <= init
        if cfg.heuristic == 'completion':
            score = goal_completion_heuristic(
                achieved, effective[i], satisfied
            )
        else:
            score = uniqueness_heuristic(
                achieved, effective[i], effective, satisfied, weights
            )
        scores.append(GoalScore(i, score, len(achieved), len(effective[i])))
    return tuple(scores)


def recognize(
    bundle: RecognitionBundle,
    cfg: RecognitionConfig,
    o_prefix: Sequence[Action] | None = None,
    landmark_sets: Sequence[LandmarkSet] | None = None,
    threshold: Fraction | int | str = 0,
) -> Recognition:
    """Recognize the most likely goals of `bundle` from observations.

    Parameters
    ----------
    bundle : RecognitionBundle
        The recognition problem.
    cfg : RecognitionConfig
        The recognizer variant.
    o_prefix : sequence of Action, optional
        A prefix of the bundle observations. The default is all of them.
    landmark_sets : sequence of LandmarkSet, optional
        Precomputed landmarks of every goal, extracted with the extractor
        of `cfg` if not given.
    threshold : Fraction, int or str, optional
        Non-negative tolerance. Goals scoring at least the best score minus
        `threshold` are recognized. The default is 0, i.e. the exact
        argmax.

    Returns
    -------
    Recognition
        Per-goal scores and the nonempty set of recognized goal indices.
    """
    if o_prefix is None:
        o_prefix = bundle.observations
    o_prefix = tuple(o_prefix)
    if o_prefix != bundle.observations[: len(o_prefix)]:
        raise ValueError('observations are not a prefix of the bundle ones')
    threshold = Fraction(threshold)
    if threshold < 0:
        raise ValueError(f'threshold must be non-negative, got {threshold}')

    if landmark_sets is None:
        landmark_sets = goal_landmarks(bundle, cfg.extractor)

    scores = score_goals(
        bundle.init, bundle.goals, o_prefix, landmark_sets, cfg
    )
    best = max(s.score for s in scores)
    recognized = frozenset(
        s.goal_index for s in scores if s.score >= best - threshold
    )
    return Recognition(scores, recognized)
