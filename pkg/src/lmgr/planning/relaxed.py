"""Delete relaxation: relaxed planning graph, reachability and h_add."""

from __future__ import annotations

import heapq
import math
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from collections.abc import Iterable

    from lmgr.planning.strips import Action, Fact, GroundedProblem
    from lmgr.util.typing import State


class RelaxedPlanningGraph:
    """Relaxed planning graph built to its fixpoint.

    Use :func:`build_rpg` to construct a graph.

    Parameters
    ----------
    problem : GroundedProblem
        The planning problem.
    fact_level : dict
        First level of every reached fact id.
    action_level : dict
        First level of every applicable action index.
    banned : frozenset of int
        Indices of the actions excluded from the graph.
    """

    def __init__(
        self,
        problem: GroundedProblem,
        fact_level: dict[int, int],
        action_level: dict[int, int],
        banned: frozenset[int],
    ):
        self._problem = problem
        self._fact_level = fact_level
        self._action_level = action_level
        self._banned = banned
        self._depth = max(fact_level.values(), default=0)

        facts = problem.facts
        actions = problem.actions
        fact_layers = []
        action_layers = []
        for i in range(self._depth + 1):
            fact_layers.append(
                frozenset(facts[f] for f, lv in fact_level.items() if lv <= i)
            )
            action_layers.append(
                frozenset(
                    actions[a] for a, lv in action_level.items() if lv <= i
                )
            )
        self._fact_layers = tuple(fact_layers)
        self._action_layers = tuple(action_layers)
        self._first_level = {facts[f]: lv for f, lv in fact_level.items()}

        first_achievers = {}
        for f, lv in fact_level.items():
            if lv == 0:
                continue
            first_achievers[facts[f]] = frozenset(
                actions[a]
                for a in problem.achiever_ids(f)
                if action_level.get(a, lv) <= lv - 1
            )
        self._first_achievers = first_achievers

    def __repr__(self) -> str:
        return (
            f'RelaxedPlanningGraph(levels={len(self._fact_layers)}, '
            f'facts={len(self.facts)}, banned={len(self._banned)})'
        )

    @property
    def fact_layers(self) -> tuple[frozenset[Fact], ...]:
        """Fact layers ``F0 <= F1 <= ...`` up to the fixpoint."""
        return self._fact_layers

    @property
    def action_layers(self) -> tuple[frozenset[Action], ...]:
        """Actions applicable in each fact layer."""
        return self._action_layers

    @property
    def facts(self) -> frozenset[Fact]:
        """Fixpoint fact set."""
        return self._fact_layers[-1]

    @property
    def first_level(self) -> dict[Fact, int]:
        """Level where each reached fact first appears."""
        return self._first_level

    @property
    def first_achievers(self) -> dict[Fact, frozenset[Action]]:
        """Achievers applicable strictly before each fact's first level.

        Facts of the initial state have no entry.
        """
        return self._first_achievers

    @property
    def banned(self) -> frozenset[int]:
        """Indices of the actions excluded from the graph."""
        return self._banned


def _ban_ids(
    p: GroundedProblem, banned_actions: Iterable[Action]
) -> frozenset[int]:
    return frozenset(p.action_index(a) for a in banned_actions)


def build_rpg(
    p: GroundedProblem,
    banned_actions: Iterable[Action] = (),
    init: State | None = None,
) -> RelaxedPlanningGraph:
    """Build the relaxed planning graph of `p` without `banned_actions`.

    Delete lists are ignored. Levels are expanded until no new fact is
    added, which takes at most ``|F|`` iterations.

    Parameters
    ----------
    p : GroundedProblem
        The planning problem.
    banned_actions : iterable of Action, optional
        Actions excluded from the graph.
    init : set of Fact, optional
        Facts of layer 0. The default is the initial state of `p`.

    Returns
    -------
    RelaxedPlanningGraph
        The graph at its fixpoint.
    """
    banned = _ban_ids(p, banned_actions)
    start = p.init if init is None else init
    fact_level = {f: 0 for f in p.state_ids(start)}
    action_level = {}
    remaining = [len(pre) for pre in p.pre_ids]
    pre_ids = p.pre_ids
    add_ids = p.add_ids

    level = 0
    current = sorted(fact_level)
    enabled = [
        a for a in range(len(pre_ids)) if not pre_ids[a] and a not in banned
    ]
    while level <= len(p.facts):
        for f in current:
            for a in p.consumer_ids(f):
                remaining[a] -= 1
                if remaining[a] == 0 and a not in banned:
                    enabled.append(a)
        new_facts = []
        for a in enabled:
            action_level[a] = level
            for f in add_ids[a]:
                if f not in fact_level:
                    fact_level[f] = level + 1
                    new_facts.append(f)
        if not new_facts:
            break
        enabled = []
        current = new_facts
        level += 1

    return RelaxedPlanningGraph(p, fact_level, action_level, banned)


def relaxed_reachable(rpg: RelaxedPlanningGraph, g: State) -> bool:
    """Check whether `g` is contained in the fixpoint of `rpg`."""
    return g <= rpg.facts


def relaxed_closure(
    p: GroundedProblem,
    banned: Iterable[int] = (),
    init: State | None = None,
    stop_at: frozenset[int] | None = None,
) -> set[int]:
    """Fact ids reachable under the delete relaxation.

    A leaner variant of :func:`build_rpg` that keeps no layers, used by the
    landmark tests that build one closure per candidate fact.

    Parameters
    ----------
    p : GroundedProblem
        The planning problem.
    banned : iterable of int
        Indices of excluded actions.
    init : set of Fact, optional
        The start state. The default is the initial state of `p`.
    stop_at : frozenset of int, optional
        If given, stop as soon as all these fact ids are reached.

    Returns
    -------
    set of int
        The reached fact ids.
    """
    banned = frozenset(banned)
    start = p.init if init is None else init
    reached = set(p.state_ids(start))
    pre_ids = p.pre_ids
    add_ids = p.add_ids
    remaining = [len(pre) for pre in pre_ids]
    queue = list(reached)
    for a in range(len(pre_ids)):
        if not pre_ids[a] and a not in banned:
            for f in add_ids[a]:
                if f not in reached:
                    reached.add(f)
                    queue.append(f)
    while queue:
        if stop_at is not None and stop_at <= reached:
            break
        f = queue.pop()
        for a in p.consumer_ids(f):
            remaining[a] -= 1
            if remaining[a] == 0 and a not in banned:
                for g in add_ids[a]:
                    if g not in reached:
                        reached.add(g)
                        queue.append(g)
    return reached


def h_add(
    p: GroundedProblem,
    s: State,
    g: State | None = None,
) -> int | float:
    """Additive delete-relaxation estimate of the cost from `s` to `g`.

    The cost of a fact is 0 if it holds in `s`, else the minimum over its
    achievers of the action cost plus the summed precondition costs. The
    estimate is the summed cost of the goal facts.

    Parameters
    ----------
    p : GroundedProblem
        The planning problem.
    s : set of Fact
        The state to evaluate.
    g : set of Fact, optional
        The goal. The default is the goal of `p`.

    Returns
    -------
    int or float
        The estimate, ``math.inf`` if some goal fact is relaxed-unreachable.
        It is an integer for integer action costs.
    """
    goal = p.goal if g is None else g
    goal_ids = p.state_ids(goal)
    if not goal_ids:
        return 0
    actions = p.actions
    pre_ids = p.pre_ids
    add_ids = p.add_ids

    cost: dict[int, float] = {}
    remaining = [len(pre) for pre in pre_ids]
    # generalized Dijkstra, valid as the additive cost is monotone
    heap = [(0, f) for f in sorted(p.state_ids(s))]
    for a in range(len(pre_ids)):
        if not pre_ids[a]:
            for f in add_ids[a]:
                heap.append((actions[a].cost, f))
    heapq.heapify(heap)

    open_goals = set(goal_ids)
    while heap and open_goals:
        c, f = heapq.heappop(heap)
        if f in cost:
            continue
        cost[f] = c
        open_goals.discard(f)
        for a in p.consumer_ids(f):
            remaining[a] -= 1
            if remaining[a] == 0:
                ca = actions[a].cost + sum(cost[q] for q in pre_ids[a])
                for q in add_ids[a]:
                    if q not in cost:
                        heapq.heappush(heap, (ca, q))

    if open_goals:
        return math.inf
    return sum(cost[f] for f in goal_ids)
