"""PDDL parsing, grounding and benchmark bundles."""

from .bundle import (
    RecognitionBundle,
    discover_bundles,
    load_bundle,
    write_bundle,
)
from .grounding import ground
from .parser import DomainAST, ProblemAST, parse_domain, parse_problem

__all__ = [
    'RecognitionBundle',
    'discover_bundles',
    'load_bundle',
    'write_bundle',
    'ground',
    'DomainAST',
    'ProblemAST',
    'parse_domain',
    'parse_problem',
]
