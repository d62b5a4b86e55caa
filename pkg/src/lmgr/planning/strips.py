"""Ground STRIPS semantics: facts, actions, states and plan validation."""

from __future__ import annotations

import copy
from collections import defaultdict
from typing import TYPE_CHECKING, NamedTuple

from lmgr.errors import InapplicableActionError

if TYPE_CHECKING:
    from collections.abc import Iterable

    from lmgr.util.typing import Plan, State


class Fact(NamedTuple):
    """A ground atom such as ``(at c1)``.

    Facts are ordered lexicographically by predicate and then arguments.
    """

    predicate: str
    """Predicate symbol."""

    args: tuple[str, ...] = ()
    """Object symbols."""

    def __str__(self) -> str:
        return '(' + ' '.join((self.predicate, *self.args)) + ')'


class Action(NamedTuple):
    """A grounded action."""

    name: str
    """Schema name."""

    args: tuple[str, ...]
    """Object symbols bound to the schema parameters."""

    pre: frozenset[Fact]
    """Preconditions."""

    add: frozenset[Fact]
    """Add effects."""

    delete: frozenset[Fact]
    """Delete effects."""

    cost: int | float = 1
    """Non-negative action cost."""

    @property
    def key(self) -> tuple[str, tuple[str, ...]]:
        """Sort and lookup key, i.e. name and arguments."""
        return self.name, self.args

    def __str__(self) -> str:
        return '(' + ' '.join((self.name, *self.args)) + ')'


class PlanReport(NamedTuple):
    """Result of :func:`validate_plan`."""

    valid: bool
    """Whether all steps are applicable in sequence and the goal holds."""

    cost: int | float
    """Total cost of the applied steps."""

    trace: tuple[State, ...]
    """States visited, starting with the initial state."""

    failed_step: int | None
    """Index of the first inapplicable step, if any."""


class GroundedProblem:
    """A STRIPS planning problem ``<F, s0, A, g>``.

    Facts are interned to dense integer ids following their lexicographic
    order, and actions are kept sorted by name and arguments, so iteration
    over either never depends on hashing.

    Parameters
    ----------
    facts : iterable of Fact
        The fact universe F.
    init : iterable of Fact
        The initial state.
    actions : iterable of Action
        The grounded actions.
    goal : iterable of Fact
        The goal conjunction.
    name : str, optional
        Problem name. The default is ``''``.
    unreachable : iterable of Fact, optional
        Facts of F known to be relaxed-unreachable from the initial state.
    """

    def __init__(
        self,
        facts: Iterable[Fact],
        init: Iterable[Fact],
        actions: Iterable[Action],
        goal: Iterable[Fact],
        name: str = '',
        unreachable: Iterable[Fact] = (),
    ):
        self._facts = tuple(sorted(set(facts)))
        self._fact_id = {f: i for i, f in enumerate(self._facts)}
        self._init = frozenset(init)
        self._goal = frozenset(goal)
        self._name = str(name)
        self._unreachable = frozenset(unreachable)

        self._check_facts(self._init, 'initial state')
        self._check_facts(self._goal, 'goal')
        self._check_facts(self._unreachable, 'unreachable facts')

        actions = sorted(set(actions), key=lambda a: a.key)
        for a in actions:
            if a.cost < 0:
                raise ValueError(f'action {a} has negative cost {a.cost}')
            self._check_facts(a.pre | a.add | a.delete, f'action {a}')
        self._actions = tuple(actions)
        self._action_by_key = {a.key: a for a in self._actions}
        self._action_pos = {a.key: i for i, a in enumerate(self._actions)}
        if len(self._action_by_key) != len(self._actions):
            raise ValueError('actions with the same name and arguments')

        fid = self._fact_id
        self._pre_ids = tuple(
            tuple(sorted(fid[f] for f in a.pre)) for a in self._actions
        )
        self._add_ids = tuple(
            tuple(sorted(fid[f] for f in a.add)) for a in self._actions
        )
        achievers = defaultdict(list)
        consumers = defaultdict(list)
        for i, a in enumerate(self._actions):
            for f in self._add_ids[i]:
                achievers[f].append(i)
            for f in self._pre_ids[i]:
                consumers[f].append(i)
        self._achiever_ids = {k: tuple(v) for k, v in achievers.items()}
        self._consumer_ids = {k: tuple(v) for k, v in consumers.items()}

    def _check_facts(self, facts: frozenset[Fact], where: str) -> None:
        missing = [f for f in facts if f not in self._fact_id]
        if missing:
            names = ', '.join(map(str, sorted(missing)))
            raise ValueError(f'{where} uses facts outside F: {names}')

    def __repr__(self) -> str:
        return (
            f'GroundedProblem(name={self._name!r}, facts={len(self._facts)}, '
            f'actions={len(self._actions)}, goal={len(self._goal)})'
        )

    @property
    def name(self) -> str:
        """Problem name."""
        return self._name

    @property
    def facts(self) -> tuple[Fact, ...]:
        """Fact universe F in lexicographic order."""
        return self._facts

    @property
    def init(self) -> State:
        """Initial state s0."""
        return self._init

    @property
    def goal(self) -> State:
        """Goal g."""
        return self._goal

    @property
    def actions(self) -> tuple[Action, ...]:
        """Grounded actions sorted by name and arguments."""
        return self._actions

    @property
    def unreachable(self) -> frozenset[Fact]:
        """Facts flagged relaxed-unreachable from s0 at grounding time."""
        return self._unreachable

    @property
    def goal_relaxed_unreachable(self) -> bool:
        """Whether some goal fact was flagged relaxed-unreachable."""
        return not self._goal.isdisjoint(self._unreachable)

    def fact_id(self, fact: Fact) -> int:
        """Return the dense integer id of `fact`."""
        return self._fact_id[fact]

    def action_index(self, action: Action) -> int:
        """Return the position of `action` in :attr:`actions`."""
        return self._action_pos[action.key]

    @property
    def pre_ids(self) -> tuple[tuple[int, ...], ...]:
        """Precondition fact ids per action index."""
        return self._pre_ids

    @property
    def add_ids(self) -> tuple[tuple[int, ...], ...]:
        """Add effect fact ids per action index."""
        return self._add_ids

    def achiever_ids(self, fid: int) -> tuple[int, ...]:
        """Indices of actions adding the fact with id `fid`."""
        return self._achiever_ids.get(fid, ())

    def consumer_ids(self, fid: int) -> tuple[int, ...]:
        """Indices of actions requiring the fact with id `fid`."""
        return self._consumer_ids.get(fid, ())

    def state_ids(self, facts: Iterable[Fact]) -> frozenset[int]:
        """Map facts to their integer ids."""
        return frozenset(self._fact_id[f] for f in facts)

    def find_action(self, name: str, args: Iterable[str]) -> Action | None:
        """Look up a grounded action by name and arguments."""
        return self._action_by_key.get((name, tuple(args)))

    def achievers(self, fact: Fact) -> tuple[Action, ...]:
        """Actions whose add list contains `fact`."""
        ids = self._achiever_ids.get(self._fact_id[fact], ())
        return tuple(self._actions[i] for i in ids)

    def with_goal(self, goal: Iterable[Fact]) -> GroundedProblem:
        """Return a copy of this problem with another goal.

        The fact and action indexes are shared with this problem.
        """
        goal = frozenset(goal)
        self._check_facts(goal, 'goal')
        new = copy.copy(self)
        new._goal = goal
        return new

    def with_init(self, init: Iterable[Fact]) -> GroundedProblem:
        """Return a copy of this problem with another initial state."""
        init = frozenset(init)
        self._check_facts(init, 'initial state')
        new = copy.copy(self)
        new._init = init
        return new


def applicable(s: State, a: Action) -> bool:
    """Check whether `a` is applicable in `s`, i.e. ``Pre(a) <= s``."""
    return a.pre <= s


def apply(s: State, a: Action) -> State:
    """Apply `a` to `s`.

    The successor is ``(s - Del(a)) | Add(a)``, so a fact both added and
    deleted by `a` holds afterwards.

    Raises
    ------
    InapplicableActionError
        If a precondition of `a` does not hold in `s`.
    """
    if not a.pre <= s:
        missing = ', '.join(map(str, sorted(a.pre - s)))
        raise InapplicableActionError(
            f'{a} is not applicable, missing preconditions: {missing}'
        )
    return (s - a.delete) | a.add


def validate_plan(p: GroundedProblem, plan: Plan) -> PlanReport:
    """Simulate `plan` from the initial state of `p`.

    Parameters
    ----------
    p : GroundedProblem
        The planning problem.
    plan : sequence of Action
        The plan to validate.

    Returns
    -------
    PlanReport
        Validity, total cost, the state trace and the index of the first
        inapplicable step. The trace stops at the last reached state.
    """
    state = p.init
    trace = [state]
    cost = 0
    for i, a in enumerate(plan):
        if not applicable(state, a):
            return PlanReport(False, cost, tuple(trace), i)
        state = apply(state, a)
        trace.append(state)
        cost += a.cost
    return PlanReport(p.goal <= state, cost, tuple(trace), None)
