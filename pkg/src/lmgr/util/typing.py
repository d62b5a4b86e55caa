"""Typing aliases to shorten hints."""

from __future__ import annotations

from collections.abc import Sequence
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from lmgr.landmarks.base import Landmark
    from lmgr.planning.strips import Action, Fact

__all__ = [
    'State',
    'Plan',
    'Goals',
    'GoalIndex',
    'AchievedMap',
]

State = frozenset['Fact']
Plan = Sequence['Action']
Goals = tuple[State, ...]
GoalIndex = int
AchievedMap = dict[GoalIndex, frozenset['Landmark']]
