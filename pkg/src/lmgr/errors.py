"""Exceptions and warnings raised by lmgr."""

from __future__ import annotations

__all__ = [
    'PDDLError',
    'PDDLSyntaxError',
    'PDDLSemanticError',
    'UnsupportedFeatureError',
    'BundleError',
    'InapplicableActionError',
    'UnsolvableError',
    'GoalUnreachableError',
    'ResourceLimitError',
    'GroundingSizeError',
    'SearchLimitError',
    'OracleLimitError',
    'GoalMutationWarning',
    'UnreachableGoalWarning',
]


class PDDLError(ValueError):
    """Issued by malformed or unsupported PDDL input.

    Parameters
    ----------
    msg : str
        The error message.
    line : int, optional
        Line number (1-based) of the offending token.
    column : int, optional
        Column number (1-based) of the offending token.
    """

    def __init__(
        self,
        msg: str,
        line: int | None = None,
        column: int | None = None,
    ):
        self.msg = msg
        self.line = line
        self.column = column
        if line is not None:
            msg = f'{msg} (line {line}, column {column})'
        super().__init__(msg)


class PDDLSyntaxError(PDDLError):
    """Issued by PDDL text that does not match the grammar."""


class PDDLSemanticError(PDDLError):
    """Issued by undeclared or inconsistent symbols in PDDL text."""


class UnsupportedFeatureError(PDDLError):
    """Issued by a PDDL feature outside the ``:strips`` + ``:typing``
    subset."""


class BundleError(ValueError):
    """Issued by an inconsistent benchmark bundle directory.

    Parameters
    ----------
    msg : str
        The error message.
    path : str, optional
        The offending file.
    line : int, optional
        Line number (1-based) in `path`.
    """

    def __init__(
        self,
        msg: str,
        path: str | None = None,
        line: int | None = None,
    ):
        self.msg = msg
        self.path = path
        self.line = line
        if path is not None:
            where = path if line is None else f'{path}:{line}'
            msg = f'{where}: {msg}'
        super().__init__(msg)


class InapplicableActionError(ValueError):
    """Issued by applying an action whose preconditions do not hold."""


class UnsolvableError(RuntimeError):
    """Issued by a search that proved no plan exists."""


class GoalUnreachableError(UnsolvableError):
    """Issued by the landmark oracle when no plan reaches the goal."""


class ResourceLimitError(RuntimeError):
    """Issued by a computation exceeding its configured size cap."""


class GroundingSizeError(ResourceLimitError):
    """Issued by grounding producing more actions than allowed."""


class SearchLimitError(ResourceLimitError):
    """Issued by the planner expanding more nodes than allowed."""


class OracleLimitError(ResourceLimitError):
    """Issued by the oracle visiting more states than allowed."""


class GoalMutationWarning(Warning):
    """Issued by goals left unmodified after mutation retries ran out."""


class UnreachableGoalWarning(Warning):
    """Issued by landmark extraction for a relaxed-unreachable goal."""
