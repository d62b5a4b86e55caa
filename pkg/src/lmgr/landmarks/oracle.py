"""Brute-force landmark oracle over the explicit state space.

A fact set is a landmark iff every plan visits a state containing one of
its facts. Every plan contains an acyclic plan whose states are a subset of
its own, so it suffices to quantify over acyclic plans; equivalently, no
goal state is reachable through states avoiding the fact set.
"""

from __future__ import annotations

import logging
from collections import deque
from typing import TYPE_CHECKING

from lmgr.errors import GoalUnreachableError, OracleLimitError
from lmgr.landmarks.base import LandmarkSet
from lmgr.planning.strips import apply

if TYPE_CHECKING:
    from collections.abc import Iterable, Iterator

    from lmgr.landmarks.base import Landmark
    from lmgr.planning.strips import Action, Fact, GroundedProblem
    from lmgr.util.typing import State

__all__ = [
    'LandmarkOracle',
    'oracle_landmarks',
    'acyclic_plans',
    'DEFAULT_STATE_CAP',
]

logger = logging.getLogger(__name__)

DEFAULT_STATE_CAP = 100_000


class LandmarkOracle:
    """Explicit reachable state space of a problem.

    Parameters
    ----------
    p : GroundedProblem
        The planning problem.
    g : set of Fact, optional
        The goal. The default is the goal of `p`.
    state_cap : int, optional
        Largest number of reachable states to expand. The default is
        100,000.

    Raises
    ------
    OracleLimitError
        If more than `state_cap` states are reachable.
    GoalUnreachableError
        If no reachable state satisfies the goal, in which case every fact
        would be a landmark vacuously.
    """

    def __init__(
        self,
        p: GroundedProblem,
        g: State | None = None,
        state_cap: int = DEFAULT_STATE_CAP,
    ):
        state_cap = int(state_cap)
        if state_cap <= 0:
            raise ValueError(f'state_cap must be positive, got {state_cap}')
        self.problem = p
        self.goal = p.goal if g is None else frozenset(g)
        self.state_cap = state_cap
        self._successors = self._explore()
        if not any(self.goal <= s for s in self._successors):
            raise GoalUnreachableError(
                f'no plan reaches the goal in {p.name or "problem"}'
            )
        logger.debug('oracle explored %d states', len(self._successors))

    def _explore(self) -> dict[State, list[tuple[Action, State]]]:
        actions = self.problem.actions
        init = self.problem.init
        successors: dict[State, list[tuple[Action, State]]] = {init: []}
        queue = deque([init])
        while queue:
            s = queue.popleft()
            edges = successors[s]
            for a in actions:
                if a.pre <= s:
                    t = apply(s, a)
                    edges.append((a, t))
                    if t not in successors:
                        if len(successors) >= self.state_cap:
                            raise OracleLimitError(
                                f'more than {self.state_cap} reachable '
                                'states, the oracle refuses to approximate'
                            )
                        successors[t] = []
                        queue.append(t)
        return successors

    @property
    def n_states(self) -> int:
        """Number of reachable states."""
        return len(self._successors)

    @property
    def states(self) -> frozenset[State]:
        """Reachable states."""
        return frozenset(self._successors)

    def is_landmark(self, disjuncts: Iterable[Fact]) -> bool:
        """Whether every plan visits a state holding one of `disjuncts`."""
        d = frozenset(disjuncts)
        init = self.problem.init
        if not d.isdisjoint(init):
            return True
        seen = {init}
        queue = deque([init])
        while queue:
            s = queue.popleft()
            if self.goal <= s:
                return False
            for _, t in self._successors[s]:
                if t not in seen and d.isdisjoint(t):
                    seen.add(t)
                    queue.append(t)
        return True

    def landmarks(self) -> LandmarkSet:
        """All singleton fact landmarks, tagged ``'oracle'``."""
        p = self.problem
        found = [[f] for f in p.facts if self.is_landmark([f])]
        return LandmarkSet.build(p.init, self.goal, found, 'oracle')

    def violations(self, landmarks: Iterable[Landmark]) -> list[Landmark]:
        """The landmarks that some plan avoids."""
        return [lm for lm in landmarks if not self.is_landmark(lm.disjuncts)]


def oracle_landmarks(
    p: GroundedProblem,
    g: State | None = None,
    state_cap: int = DEFAULT_STATE_CAP,
) -> LandmarkSet:
    """Exact singleton landmarks of `g` by exhaustive state enumeration.

    See :class:`LandmarkOracle` for the parameters and errors.
    """
    return LandmarkOracle(p, g, state_cap).landmarks()


def acyclic_plans(
    p: GroundedProblem,
    g: State | None = None,
    max_plans: int = 10_000,
) -> Iterator[list[Action]]:
    """Enumerate plans that never revisit a state, depth first.

    A plan ends at the first goal state on its path. Enumeration stops after
    `max_plans` plans.
    """
    goal = p.goal if g is None else frozenset(g)
    actions = p.actions
    count = 0
    path: list[Action] = []
    on_path = {p.init}
    stack = [(p.init, iter(actions))]
    if goal <= p.init:
        yield []
        return
    while stack:
        s, it = stack[-1]
        for a in it:
            if not a.pre <= s:
                continue
            t = apply(s, a)
            if t in on_path:
                continue
            path.append(a)
            if goal <= t:
                yield list(path)
                count += 1
                if count >= max_plans:
                    return
                path.pop()
                continue
            on_path.add(t)
            stack.append((t, iter(actions)))
            break
        else:
            stack.pop()
            if path:
                path.pop()
            on_path.discard(s)
