"""Greedy best-first planner used to generate observation sequences."""

from __future__ import annotations

import heapq
import logging
import math
from typing import TYPE_CHECKING

import numpy as np

from lmgr.errors import SearchLimitError, UnsolvableError
from lmgr.planning.relaxed import h_add
from lmgr.planning.strips import apply, validate_plan

if TYPE_CHECKING:
    from lmgr.planning.strips import Action, GroundedProblem
    from lmgr.util.typing import State

__all__ = ['plan_observations', 'DEFAULT_NODE_CAP']

logger = logging.getLogger(__name__)

DEFAULT_NODE_CAP = 200_000


def plan_observations(
    p: GroundedProblem,
    g: State | None = None,
    seed: int = 42,
    node_cap: int = DEFAULT_NODE_CAP,
) -> list[Action]:
    """Find a plan by greedy best-first search guided by :func:`h_add`.

    Open nodes are ordered by their estimate, and ties are broken by a
    random key drawn from a generator seeded with `seed`, so the plan is
    reproducible for a given seed.

    Parameters
    ----------
    p : GroundedProblem
        The planning problem.
    g : set of Fact, optional
        The goal. The default is the goal of `p`.
    seed : int, optional
        Seed of the tie-breaking generator. The default is 42.
    node_cap : int, optional
        Largest number of expanded nodes. The default is 200,000.

    Returns
    -------
    list of Action
        A plan that passes :func:`validate_plan`.

    Raises
    ------
    UnsolvableError
        If the search space is exhausted without reaching the goal.
    SearchLimitError
        If more than `node_cap` nodes are expanded.
    """
    node_cap = int(node_cap)
    if node_cap <= 0:
        raise ValueError(f'node_cap must be positive, got {node_cap}')
    goal = p.goal if g is None else frozenset(g)
    problem = p.with_goal(goal)
    rng = np.random.default_rng(seed)

    init = problem.init
    h0 = h_add(problem, init, goal)
    if math.isinf(h0):
        raise UnsolvableError(
            f'goal is relaxed-unreachable in {p.name or "problem"}'
        )

    parent: dict[State, tuple[State, Action] | None] = {init: None}
    counter = 0
    heap = [(h0, rng.random(), counter, init)]
    expanded = 0
    found = None
    while heap:
        _, _, _, s = heapq.heappop(heap)
        if goal <= s:
            found = s
            break
        expanded += 1
        if expanded > node_cap:
            raise SearchLimitError(
                f'search expanded more than {node_cap} nodes'
            )
        for a in problem.actions:
            if not a.pre <= s:
                continue
            t = apply(s, a)
            if t in parent:
                continue
            h = h_add(problem, t, goal)
            parent[t] = (s, a)
            if math.isinf(h):
                continue
            counter += 1
            heapq.heappush(heap, (h, rng.random(), counter, t))

    if found is None:
        raise UnsolvableError(
            f'no plan reaches the goal in {p.name or "problem"}'
        )

    plan = []
    step = parent[found]
    while step is not None:
        s, a = step
        plan.append(a)
        step = parent[s]
    plan.reverse()

    report = validate_plan(problem, plan)
    if not report.valid:
        raise RuntimeError('search returned an invalid plan')
    logger.debug(
        'plan of %d steps found after %d expansions', len(plan), expanded
    )
    return plan
