"""Online goal recognition over observation prefixes and its precision."""

from __future__ import annotations

import logging
import math
import multiprocessing
from fractions import Fraction
from typing import TYPE_CHECKING, NamedTuple

from lmgr.errors import BundleError
from lmgr.landmarks.extract import DEFAULT_DISJUNCT_CAP
from lmgr.pddl.bundle import load_bundle
from lmgr.pddl.grounding import DEFAULT_MAX_ACTIONS
from lmgr.recognition.recognizer import goal_landmarks, recognize
from lmgr.util.config import get_parallel_number
from lmgr.util.misc import progress_bar

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence
    from pathlib import Path

    from lmgr.landmarks.base import LandmarkSet
    from lmgr.pddl.bundle import RecognitionBundle
    from lmgr.planning.strips import Action
    from lmgr.recognition.recognizer import RecognitionConfig

__all__ = [
    'OnlineProblem',
    'EvaluationRow',
    'DEFAULT_LAMBDAS',
    'as_fraction',
    'observation_prefix',
    'prefix_precision',
    'precision',
    'evaluate',
    'load_problems',
]

logger = logging.getLogger(__name__)

DEFAULT_LAMBDAS = tuple(Fraction(i, 10) for i in range(1, 11))
OVERALL_DOMAIN = 'all'


def as_fraction(value: Fraction | float | int | str) -> Fraction:
    """Convert to an exact rational, reading floats by their decimal repr."""
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


class OnlineProblem:
    """A recognition problem whose observations are revealed step by step.

    Parameters
    ----------
    bundle : RecognitionBundle
        The recognition problem.
    domain : str, optional
        Domain label. The default is the domain name of `bundle`.
    variant : str, optional
        Dataset variant label. The default is the variant of `bundle`.
    """

    def __init__(
        self,
        bundle: RecognitionBundle,
        domain: str | None = None,
        variant: str | None = None,
    ):
        if not bundle.observations:
            raise ValueError(f'bundle {bundle.name} has no observations')
        self.bundle = bundle
        self.domain = bundle.domain.name if domain is None else str(domain)
        self.variant = bundle.variant if variant is None else str(variant)

    def __repr__(self) -> str:
        return (
            f'OnlineProblem(name={self.bundle.name!r}, '
            f'domain={self.domain!r}, variant={self.variant!r}, T={self.T})'
        )

    @property
    def T(self) -> int:
        """Number of observations."""
        return len(self.bundle.observations)

    @property
    def key(self) -> tuple[str, str, str]:
        """Identity used for caching and ordering."""
        path = self.bundle.path
        return self.domain, self.variant, str(path or self.bundle.name)


def observation_prefix(
    problem: OnlineProblem, lam: Fraction | float | str
) -> tuple[Action, ...]:
    """The first ``floor(T * lam)`` observations of `problem`."""
    lam = as_fraction(lam)
    if not 0 <= lam <= 1:
        raise ValueError(f'lambda must be in [0, 1], got {lam}')
    return problem.bundle.observations[: math.floor(problem.T * lam)]


def prefix_precision(
    problem: OnlineProblem,
    cfg: RecognitionConfig,
    lam: Fraction | float | str,
    landmark_sets: Sequence[LandmarkSet] | None = None,
) -> Fraction:
    """Probability of picking the true goal from the recognized goals."""
    bundle = problem.bundle
    _, recognized = recognize(
        bundle, cfg, observation_prefix(problem, lam), landmark_sets
    )
    if bundle.true_goal not in recognized:
        return Fraction(0)
    return Fraction(1, len(recognized))


def precision(
    lam: Fraction | float | str,
    problems: Sequence[OnlineProblem],
    cfg: RecognitionConfig,
) -> Fraction:
    """Mean precision over `problems` at observation fraction `lam`."""
    if not problems:
        raise ValueError('precision needs at least one problem')
    total = sum(
        (prefix_precision(r, cfg, lam) for r in problems), Fraction(0)
    )
    return total / len(problems)


class EvaluationRow(NamedTuple):
    """Mean precision of one recognizer variant at one ``lambda``."""

    domain: str
    variant: str
    extractor: str
    heuristic: str
    include_init: bool
    lam: Fraction
    precision: Fraction
    n_problems: int

    @property
    def config_key(self) -> tuple[str, str, str, bool]:
        return self.variant, self.extractor, self.heuristic, self.include_init


def _problem_values(
    problem: OnlineProblem,
    configs: Sequence[RecognitionConfig],
    lambdas: Sequence[Fraction],
    disjunct_cap: int,
    use_cache: bool,
) -> dict[tuple[RecognitionConfig, Fraction], Fraction]:
    cache: dict[str, tuple[LandmarkSet, ...]] = {}
    values = {}
    for cfg in configs:
        if use_cache:
            if cfg.extractor not in cache:
                cache[cfg.extractor] = goal_landmarks(
                    problem.bundle, cfg.extractor, disjunct_cap
                )
            lms = cache[cfg.extractor]
        else:
            lms = goal_landmarks(problem.bundle, cfg.extractor, disjunct_cap)
        for lam in lambdas:
            values[cfg, lam] = prefix_precision(problem, cfg, lam, lms)
    logger.debug('evaluated %s', problem)
    return values


def _worker(args):
    return _problem_values(*args)


def evaluate(
    problems: Iterable[OnlineProblem],
    configs: Sequence[RecognitionConfig],
    lambdas: Sequence[Fraction | float | str] = DEFAULT_LAMBDAS,
    jobs: int | None = 1,
    include_overall: bool = False,
    disjunct_cap: int = DEFAULT_DISJUNCT_CAP,
    use_cache: bool = True,
    progress: bool = False,
) -> list[EvaluationRow]:
    """Mean precision per domain, variant, recognizer variant and lambda.

    Landmarks are extracted once per problem and extractor unless
    `use_cache` is False. The rows are sorted and do not depend on `jobs`.

    Parameters
    ----------
    problems : iterable of OnlineProblem
        The problems, grouped by their domain and variant labels.
    configs : sequence of RecognitionConfig
        The recognizer variants.
    lambdas : sequence of rational, optional
        Observation fractions. The default is 0.1, 0.2, ..., 1.0.
    jobs : int, optional
        Number of worker processes. None means one per processor. The
        default is 1.
    include_overall : bool, optional
        Whether to add rows with domain ``'all'`` averaging every problem
        of a variant. The default is False.
    disjunct_cap : int, optional
        Passed to the ``'rhw'`` extractor. The default is 4.
    use_cache : bool, optional
        Whether to reuse landmark sets across variants sharing an
        extractor. The default is True.
    progress : bool, optional
        Whether to show a progress bar. The default is False.

    Returns
    -------
    list of EvaluationRow
        The rows in canonical order.
    """
    problems = sorted(problems, key=lambda r: r.key)
    configs = list(dict.fromkeys(configs))
    lambdas = sorted({as_fraction(lam) for lam in lambdas})
    if not problems:
        raise ValueError('no problems to evaluate')
    if not configs:
        raise ValueError('no recognizer configurations to evaluate')
    for lam in lambdas:
        if not 0 <= lam <= 1:
            raise ValueError(f'lambda must be in [0, 1], got {lam}')

    n_jobs = get_parallel_number(jobs)
    tasks = [(r, configs, lambdas, disjunct_cap, use_cache) for r in problems]
    if n_jobs == 1 or len(problems) == 1:
        results = [
            _worker(t)
            for t in progress_bar(tasks, 'Evaluating', enable=progress)
        ]
    else:
        with multiprocessing.Pool(processes=n_jobs) as pool:
            results = list(
                progress_bar(
                    pool.imap(_worker, tasks),
                    'Evaluating',
                    total=len(tasks),
                    enable=progress,
                )
            )

    groups: dict[tuple[str, str], list[int]] = {}
    for i, r in enumerate(problems):
        groups.setdefault((r.domain, r.variant), []).append(i)
        if include_overall:
            groups.setdefault((OVERALL_DOMAIN, r.variant), []).append(i)

    rows = []
    for (domain, variant), members in groups.items():
        for cfg in configs:
            for lam in lambdas:
                total = sum(
                    (results[i][cfg, lam] for i in members), Fraction(0)
                )
                rows.append(
                    EvaluationRow(
                        domain,
                        variant,
                        cfg.extractor,
                        cfg.heuristic,
                        cfg.include_initial_state_landmarks,
                        lam,
                        total / len(members),
                        len(members),
                    )
                )
    rows.sort(key=lambda row: row[:6])
    logger.info(
        'evaluated %d problems with %d configurations',
        len(problems),
        len(configs),
    )
    return rows


def load_problems(
    paths: Iterable[str | Path],
    max_actions: int = DEFAULT_MAX_ACTIONS,
    progress: bool = False,
) -> list[OnlineProblem]:
    """Load bundle directories as online problems.

    Raises
    ------
    BundleError
        If a bundle cannot be loaded or has no observations; the message
        names the bundle.
    """
    paths = list(paths)
    problems = []
    for path in progress_bar(paths, 'Loading', enable=progress):
        try:
            problems.append(OnlineProblem(load_bundle(path, max_actions)))
        except BundleError:
            raise
        except ValueError as err:
            raise BundleError(str(err), str(path)) from err
    return problems
