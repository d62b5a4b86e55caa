"""Instantiate action schemas into a :class:`GroundedProblem`."""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING

from lmgr.errors import GroundingSizeError
from lmgr.pddl.parser import Atom, check_ground_atom, object_types
from lmgr.planning.relaxed import relaxed_closure
from lmgr.planning.strips import Action, Fact, GroundedProblem

if TYPE_CHECKING:
    from collections.abc import Iterable

    from lmgr.pddl.parser import ActionSchema, DomainAST, ProblemAST

logger = logging.getLogger(__name__)

DEFAULT_MAX_ACTIONS = 1_000_000


def static_predicates(d: DomainAST) -> frozenset[str]:
    """Predicates that no action schema adds or deletes."""
    fluent = {
        e.predicate
        for a in d.actions
        for e in a.add_effects + a.del_effects
    }
    return frozenset(p.name for p in d.predicates if p.name not in fluent)


def _objects_by_type(
    p: ProblemAST, d: DomainAST
) -> dict[str, tuple[str, ...]]:
    by_type: dict[str, set[str]] = {}
    for obj, t in object_types(p, d).items():
        for st in d.supertypes(t):
            by_type.setdefault(st, set()).add(obj)
    return {t: tuple(sorted(objs)) for t, objs in by_type.items()}


def _instantiate(atom: Atom, binding: dict[str, str]) -> Fact:
    return Fact(atom.predicate, tuple(binding.get(a, a) for a in atom.args))


def _ground_schema(
    schema: ActionSchema,
    objects: dict[str, tuple[str, ...]],
    static: frozenset[str],
    static_true: frozenset[Fact],
    budget: int,
    max_actions: int,
) -> list[Action]:
    """Enumerate the bindings of `schema` consistent with static facts.

    A static precondition is tested as soon as its last variable is bound,
    so bindings violating it are never extended.
    """
    params = schema.parameters
    position = {p.name: i for i, p in enumerate(params)}
    checks: list[list[Atom]] = [[] for _ in range(len(params) + 1)]
    dynamic_pre = []
    for atom in schema.precondition:
        if atom.predicate in static:
            depth = max(
                (position[a] + 1 for a in atom.args if a in position),
                default=0,
            )
            checks[depth].append(atom)
        else:
            dynamic_pre.append(atom)

    if any(_instantiate(a, {}) not in static_true for a in checks[0]):
        return []

    domains = [objects.get(p.type, ()) for p in params]
    result: list[Action] = []
    binding: dict[str, str] = {}

    def extend(i: int):
        if i == len(params):
            if len(result) >= budget:
                raise GroundingSizeError(
                    f'grounding exceeds the cap of {max_actions} actions '
                    f'while instantiating {schema.name}'
                )
            args = tuple(binding[p.name] for p in params)
            result.append(
                Action(
                    schema.name,
                    args,
                    frozenset(_instantiate(a, binding) for a in dynamic_pre),
                    frozenset(
                        _instantiate(a, binding) for a in schema.add_effects
                    ),
                    frozenset(
                        _instantiate(a, binding) for a in schema.del_effects
                    ),
                )
            )
            return
        name = params[i].name
        for obj in domains[i]:
            binding[name] = obj
            if all(
                _instantiate(a, binding) in static_true for a in checks[i + 1]
            ):
                extend(i + 1)
        binding.pop(name, None)

    extend(0)
    return result


def ground(
    d: DomainAST,
    p: ProblemAST,
    goals: Iterable[Iterable[Fact]] = (),
    max_actions: int = DEFAULT_MAX_ACTIONS,
) -> GroundedProblem:
    """Ground problem `p` of domain `d`.

    Schemas are instantiated over type-compatible objects. Static facts,
    whose predicate no schema adds or deletes, are evaluated during
    instantiation and dropped from preconditions. Actions that are not
    applicable in the delete relaxation from the initial state are pruned.

    The fact universe holds the relaxed-reachable facts, the initial state
    and the facts of the problem goal and of every candidate goal in
    `goals`. Goal facts are always retained; the relaxed-unreachable ones
    are flagged in :attr:`GroundedProblem.unreachable`. A static fact stays
    in F and s0 only if some goal mentions it.

    Parameters
    ----------
    d : DomainAST
        The domain.
    p : ProblemAST
        The problem.
    goals : iterable of fact collections, optional
        Additional candidate goals whose facts are retained in F.
    max_actions : int, optional
        Cap on the number of grounded actions. The default is 1,000,000.

    Returns
    -------
    GroundedProblem
        The grounded problem with the goal of `p`.

    Raises
    ------
    GroundingSizeError
        If more than `max_actions` actions are instantiated.
    """
    max_actions = int(max_actions)
    if max_actions <= 0:
        raise ValueError(f'max_actions must be positive, got {max_actions}')

    static = static_predicates(d)
    init = frozenset(Fact(a.predicate, a.args) for a in p.init)
    static_true = frozenset(f for f in init if f.predicate in static)
    goal = frozenset(Fact(a.predicate, a.args) for a in p.goal)
    goal_facts = set(goal)
    types = object_types(p, d)
    for g in goals:
        for f in g:
            atom = Atom(f.predicate, f.args)
            check_ground_atom(atom, d, types, 'candidate goal')
            goal_facts.add(f)

    objects = _objects_by_type(p, d)
    candidates: list[Action] = []
    for schema in sorted(d.actions, key=lambda s: s.name):
        candidates += _ground_schema(
            schema,
            objects,
            static,
            static_true,
            max_actions - len(candidates),
            max_actions,
        )

    dynamic_init = frozenset(f for f in init if f.predicate not in static)
    kept_static = frozenset(f for f in static_true if f in goal_facts)
    start = dynamic_init | kept_static

    mentioned = set(start) | goal_facts
    for a in candidates:
        mentioned |= a.pre | a.add | a.delete
    relaxed = GroundedProblem(mentioned, start, candidates, ())
    reached_ids = relaxed_closure(relaxed)
    reached = frozenset(relaxed.facts[i] for i in reached_ids)

    actions = []
    for a in candidates:
        if a.pre <= reached:
            actions.append(a._replace(delete=a.delete & reached))
    facts = reached | start | goal_facts
    unreachable = frozenset(f for f in goal_facts if f not in reached)

    logger.info(
        'grounded %s: %d facts, %d of %d actions relaxed-reachable',
        p.name,
        len(facts),
        len(actions),
        len(candidates),
    )
    return GroundedProblem(facts, start, actions, goal, p.name, unreachable)
