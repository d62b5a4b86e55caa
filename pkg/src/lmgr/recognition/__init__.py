"""Goal recognition from observed actions and fact landmarks."""

from .heuristics import (
    effective_landmarks,
    goal_completion_heuristic,
    landmark_uniqueness,
    uniqueness_heuristic,
)
from .recognizer import (
    GoalScore,
    Recognition,
    RecognitionConfig,
    compute_achieved_landmarks,
    goal_landmarks,
    recognize,
)

__all__ = [
    'effective_landmarks',
    'goal_completion_heuristic',
    'landmark_uniqueness',
    'uniqueness_heuristic',
    'GoalScore',
    'Recognition',
    'RecognitionConfig',
    'compute_achieved_landmarks',
    'goal_landmarks',
    'recognize',
]
