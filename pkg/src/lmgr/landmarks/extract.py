"""Fact landmark extraction under the delete relaxation."""

from __future__ import annotations

import logging
import time
import warnings
from collections import defaultdict, deque
from typing import TYPE_CHECKING, Callable

from lmgr.errors import UnreachableGoalWarning
from lmgr.landmarks.base import LandmarkSet
from lmgr.planning.relaxed import relaxed_closure

if TYPE_CHECKING:
    from lmgr.planning.strips import Fact, GroundedProblem
    from lmgr.util.typing import State

__all__ = [
    'verify_fact_landmark',
    'extract_exhaustive',
    'extract_rhw',
    'extract_hm',
    'extract_landmarks',
    'EXTRACTORS',
    'DEFAULT_DISJUNCT_CAP',
]

logger = logging.getLogger(__name__)

DEFAULT_DISJUNCT_CAP = 4


def _goal_ids(p: GroundedProblem, g: State | None) -> frozenset[int]:
    return p.state_ids(p.goal if g is None else g)


def _is_landmark_id(
    p: GroundedProblem,
    goal_ids: frozenset[int],
    init_ids: frozenset[int],
    fid: int,
) -> bool:
    if fid in init_ids or fid in goal_ids:
        return True
    reached = relaxed_closure(p, p.achiever_ids(fid), stop_at=goal_ids)
    return not goal_ids <= reached


def verify_fact_landmark(p: GroundedProblem, g: State, f: Fact) -> bool:
    """Relaxed landmark test of fact `f` for goal `g`.

    Facts of the initial state or of `g` are landmarks by definition.
    Any other fact is a landmark if `g` is not relaxed-reachable once every
    achiever of `f` is removed. The test is sound but incomplete.
    """
    goal_ids = p.state_ids(g)
    return _is_landmark_id(p, goal_ids, p.state_ids(p.init), p.fact_id(f))


def _unreachable_goal(
    p: GroundedProblem, goal: State, tag: str
) -> LandmarkSet:
    warnings.warn(
        f'goal {{{", ".join(map(str, sorted(goal)))}}} is relaxed-unreachable '
        f'in {p.name or "problem"}, only goal facts are returned as '
        'landmarks',
        UnreachableGoalWarning,
        stacklevel=3,
    )
    return LandmarkSet.build(p.init, goal, ([f] for f in goal), tag)


def _log_done(tag: str, lms: LandmarkSet, t0: float) -> None:
    logger.info(
        '%s extraction: %d landmarks in %.3f s',
        tag,
        len(lms),
        time.perf_counter() - t0,
    )
    logger.debug('%s landmark counts: %s', tag, lms.counts())


def extract_exhaustive(
    p: GroundedProblem, g: State | None = None
) -> LandmarkSet:
    """Test every fact with :func:`verify_fact_landmark`.

    Parameters
    ----------
    p : GroundedProblem
        The planning problem.
    g : set of Fact, optional
        The goal. The default is the goal of `p`.

    Returns
    -------
    LandmarkSet
        Singleton landmarks, trivial ones included, tagged ``'ex'``.
    """
    t0 = time.perf_counter()
    goal = p.goal if g is None else frozenset(g)
    goal_ids = p.state_ids(goal)
    reached = relaxed_closure(p)
    if not goal_ids <= reached:
        return _unreachable_goal(p, goal, 'ex')

    init_ids = p.state_ids(p.init)
    # a fact outside the closure cannot affect reachability of the goal
    found = [
        [p.facts[fid]]
        for fid in sorted(reached | goal_ids)
        if _is_landmark_id(p, goal_ids, init_ids, fid)
    ]
    lms = LandmarkSet.build(p.init, goal, found, 'ex')
    _log_done('ex', lms, t0)
    return lms


class _BackChainer:
    """Back-chaining over possible first achievers.

    The possible first achievers of a landmark are the achievers of any of
    its facts that are applicable in the delete relaxation while all of
    these achievers are excluded. The landmark first becomes true through
    one of them on every plan, so facts shared by their preconditions are
    landmarks, and so is the union of their preconditions of one predicate.
    """

    def __init__(self, p: GroundedProblem, goal_ids: frozenset[int]):
        self.p = p
        self.goal_ids = goal_ids
        self.init_ids = p.state_ids(p.init)

    def first_achievers(self, lm: frozenset[int]) -> list[int]:
        p = self.p
        achievers = sorted({a for f in lm for a in p.achiever_ids(f)})
        reached = relaxed_closure(p, achievers)
        return [a for a in achievers if reached.issuperset(p.pre_ids[a])]

    def verify(self, fid: int) -> bool:
        return _is_landmark_id(self.p, self.goal_ids, self.init_ids, fid)

    def run(self, disjunct_cap: int | None) -> list[frozenset[int]]:
        pre_ids = self.p.pre_ids
        facts = self.p.facts
        singletons = set(self.goal_ids)
        disjunctive: set[frozenset[int]] = set()
        queue = deque(frozenset([f]) for f in sorted(self.goal_ids))
        rejected: set[int] = set()

        while queue:
            lm = queue.popleft()
            if not lm.isdisjoint(self.init_ids):
                continue
            achievers = self.first_achievers(lm)
            if not achievers:
                continue

            shared = set(pre_ids[achievers[0]])
            for a in achievers[1:]:
                shared.intersection_update(pre_ids[a])
            for q in sorted(shared):
                if q in singletons or q in rejected:
                    continue
                if self.verify(q):
                    singletons.add(q)
                    queue.append(frozenset([q]))
                else:
                    rejected.add(q)

            if disjunct_cap is None:
                continue
            by_predicate: dict[str, list[set[int]]] = defaultdict(list)
            for a in achievers:
                groups = defaultdict(set)
                for q in pre_ids[a]:
                    groups[facts[q].predicate].add(q)
                for name, qs in groups.items():
                    by_predicate[name].append(qs)
            for name in sorted(by_predicate):
                contributions = by_predicate[name]
                # every achiever must contribute a precondition
                if len(contributions) != len(achievers):
                    continue
                candidate = frozenset().union(*contributions)
                if not 1 < len(candidate) <= disjunct_cap:
                    continue
                if candidate in disjunctive:
                    continue
                if not candidate.isdisjoint(singletons):
                    continue
                disjunctive.add(candidate)
                queue.append(candidate)

        result = [frozenset([f]) for f in singletons]
        result += [d for d in disjunctive if d.isdisjoint(singletons)]
        return result


def _back_chain(
    p: GroundedProblem,
    g: State | None,
    tag: str,
    disjunct_cap: int | None,
) -> LandmarkSet:
    t0 = time.perf_counter()
    goal = p.goal if g is None else frozenset(g)
    goal_ids = p.state_ids(goal)
    if not goal_ids <= relaxed_closure(p, stop_at=goal_ids):
        return _unreachable_goal(p, goal, tag)

    found = _BackChainer(p, goal_ids).run(disjunct_cap)
    disjunct_sets = ([p.facts[f] for f in d] for d in found)
    lms = LandmarkSet.build(p.init, goal, disjunct_sets, tag)
    _log_done(tag, lms, t0)
    return lms


def extract_rhw(
    p: GroundedProblem,
    g: State | None = None,
    disjunct_cap: int = DEFAULT_DISJUNCT_CAP,
) -> LandmarkSet:
    """Back-chain singleton and disjunctive landmarks from the goal facts.

    Starting from the goal facts, the possible first achievers of each new
    landmark are computed. Facts shared by all their preconditions become
    singleton landmarks once confirmed by :func:`verify_fact_landmark`.
    Preconditions of one predicate form a disjunctive landmark if every
    achiever contributes one and there are at most `disjunct_cap` of them.
    Disjunctions containing a singleton landmark are dropped. Landmarks
    holding in the initial state are not back-chained.

    Parameters
    ----------
    p : GroundedProblem
        The planning problem.
    g : set of Fact, optional
        The goal. The default is the goal of `p`.
    disjunct_cap : int, optional
        Largest disjunctive landmark size. The default is 4.

    Returns
    -------
    LandmarkSet
        The landmarks, tagged ``'rhw'``.
    """
    disjunct_cap = int(disjunct_cap)
    if disjunct_cap < 1:
        raise ValueError(f'disjunct_cap must be positive, got {disjunct_cap}')
    return _back_chain(p, g, 'rhw', disjunct_cap)


def extract_hm(p: GroundedProblem, g: State | None = None) -> LandmarkSet:
    """Back-chain singleton landmarks only.

    Like :func:`extract_rhw` without disjunctive landmarks, i.e. only facts
    shared by the preconditions of all possible first achievers are kept.
    The result is tagged ``'hm'``.
    """
    return _back_chain(p, g, 'hm', None)


EXTRACTORS: dict[str, Callable[..., LandmarkSet]] = {
    'ex': extract_exhaustive,
    'rhw': extract_rhw,
    'hm': extract_hm,
}


def extract_landmarks(
    p: GroundedProblem,
    g: State | None = None,
    extractor: str = 'ex',
    disjunct_cap: int = DEFAULT_DISJUNCT_CAP,
) -> LandmarkSet:
    """Extract the landmarks of `g` with the extractor tagged `extractor`."""
    if extractor not in EXTRACTORS:
        supported = ', '.join(EXTRACTORS)
        raise ValueError(
            f'unknown extractor {extractor!r}, supported are: {supported}'
        )
    if extractor == 'rhw':
        return extract_rhw(p, g, disjunct_cap)
    return EXTRACTORS[extractor](p, g)
