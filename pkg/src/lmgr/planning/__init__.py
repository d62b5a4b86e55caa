"""STRIPS semantics, delete relaxation and search."""

from .relaxed import (
    RelaxedPlanningGraph,
    build_rpg,
    h_add,
    relaxed_closure,
    relaxed_reachable,
)
from .search import plan_observations
from .strips import (
    Action,
    Fact,
    GroundedProblem,
    PlanReport,
    applicable,
    apply,
    validate_plan,
)

__all__ = [
    'RelaxedPlanningGraph',
    'build_rpg',
    'h_add',
    'relaxed_closure',
    'relaxed_reachable',
    'plan_observations',
    'Action',
    'Fact',
    'GroundedProblem',
    'PlanReport',
    'applicable',
    'apply',
    'validate_plan',
]
