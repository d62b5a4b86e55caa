"""Online evaluation protocol and benchmark variant generation."""

from .goals import (
    DatasetVariant,
    VariantKind,
    generate_variant,
    mutate_goal_set,
    mutate_suite,
    select_true_goal,
)
from .online import (
    EvaluationRow,
    OnlineProblem,
    evaluate,
    load_problems,
    observation_prefix,
    precision,
)
from .output import summary_table, write_csv, write_plot_data

__all__ = [
    'DatasetVariant',
    'VariantKind',
    'generate_variant',
    'mutate_goal_set',
    'mutate_suite',
    'select_true_goal',
    'EvaluationRow',
    'OnlineProblem',
    'evaluate',
    'load_problems',
    'observation_prefix',
    'precision',
    'summary_table',
    'write_csv',
    'write_plot_data',
]
