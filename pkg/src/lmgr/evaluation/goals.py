"""Benchmark variants with mutated goal sets and chosen true goals."""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import TYPE_CHECKING, NamedTuple

import numpy as np

from lmgr.errors import GoalMutationWarning
from lmgr.pddl.bundle import discover_bundles, load_bundle, write_bundle
from lmgr.pddl.grounding import DEFAULT_MAX_ACTIONS
from lmgr.planning.search import DEFAULT_NODE_CAP, plan_observations
from lmgr.util.misc import progress_bar

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

    from lmgr.pddl.bundle import RecognitionBundle
    from lmgr.planning.strips import Action
    from lmgr.util.typing import State

__all__ = [
    'VariantKind',
    'DatasetVariant',
    'MutatedVariant',
    'is_non_subset_family',
    'mutate_goal_set',
    'select_true_goal',
    'generate_variant',
    'write_variant',
    'mutate_suite',
]

logger = logging.getLogger(__name__)

DEFAULT_MAX_RETRIES = 1000


class VariantKind(Enum):
    """How the true goal is chosen among the candidates."""

    RANDOM = 'D_R'
    LONGEST = 'D_L'
    SHORTEST = 'D_S'

    def __str__(self) -> str:
        return self.value

    @classmethod
    def parse(cls, value: str | VariantKind) -> VariantKind:
        """Parse a label such as ``'D_L'``, ``'longest'`` or ``'l'``."""
        if isinstance(value, VariantKind):
            return value
        v = str(value).strip().lower()
        for kind in cls:
            names = {kind.value.lower(), kind.name.lower(), kind.name[0]}
            names.add(kind.value[-1].lower())
            if v in names:
                return kind
        raise ValueError(f'unknown dataset variant {value!r}')


@dataclass(frozen=True)
class DatasetVariant:
    """A dataset variant and the seed it is generated with."""

    kind: VariantKind
    seed: int

    @property
    def label(self) -> str:
        return self.kind.value


def is_non_subset_family(goals: Sequence[State]) -> bool:
    """Whether no goal is a subset of, or equal to, another goal."""
    return not any(
        a <= b
        for i, a in enumerate(goals)
        for j, b in enumerate(goals)
        if i != j
    )


def mutate_goal_set(
    goals: Sequence[Iterable],
    seed: int,
    max_retries: int = DEFAULT_MAX_RETRIES,
) -> list[State]:
    """Replace every goal by a random nonempty subset of its facts.

    The subset size is drawn uniformly from ``1, ..., |g|`` and the facts
    uniformly without replacement. A draw is rejected if it is a subset or
    a superset of another current goal. After `max_retries` rejections the
    goal is kept as is and a :class:`GoalMutationWarning` is issued.

    Parameters
    ----------
    goals : sequence of fact collections
        At least two candidate goals.
    seed : int
        Seed of the random generator.
    max_retries : int, optional
        Draws per goal before giving up. The default is 1000.

    Returns
    -------
    list of frozenset
        The mutated goals, in the order of `goals`.
    """
    result = [frozenset(g) for g in goals]
    if len(result) < 2:
        raise ValueError('goal mutation needs at least two goals')
    if any(not g for g in result):
        raise ValueError('goals must be nonempty')
    rng = np.random.default_rng(seed)

    unmodified = []
    for i, goal in enumerate(result):
        facts = sorted(goal)
        others = result[:i] + result[i + 1 :]
        for _ in range(max_retries):
            size = int(rng.integers(1, len(facts) + 1))
            picks = rng.choice(len(facts), size=size, replace=False)
            subset = frozenset(facts[k] for k in sorted(picks))
            if not any(subset <= o or o <= subset for o in others):
                result[i] = subset
                break
        else:
            unmodified.append(i)

    if unmodified:
        warnings.warn(
            f'goals {unmodified} left unmodified after {max_retries} '
            'mutation attempts',
            GoalMutationWarning,
        )
    return result


def select_true_goal(
    goals: Sequence[State],
    variant: VariantKind | str,
    seed: int,
) -> int:
    """Choose the index of the true goal.

    Random picks uniformly. Longest and shortest pick by goal size, ties
    going to the goal whose sorted facts compare smallest.
    """
    if not goals:
        raise ValueError('no goals to choose from')
    kind = VariantKind.parse(variant)
    if kind is VariantKind.RANDOM:
        rng = np.random.default_rng(seed)
        return int(rng.integers(len(goals)))
    sign = -1 if kind is VariantKind.LONGEST else 1
    return min(
        range(len(goals)),
        key=lambda i: (sign * len(goals[i]), tuple(sorted(goals[i])), i),
    )


class MutatedVariant(NamedTuple):
    """Candidate goals, true goal and observations of a generated variant."""

    goals: tuple[State, ...]
    true_goal: int
    observations: tuple[Action, ...]
    meta: dict


def _child_seeds(seed: int, n: int) -> list[int]:
    children = np.random.SeedSequence(seed).spawn(n)
    return [int(c.generate_state(1)[0]) for c in children]


def generate_variant(
    bundle: RecognitionBundle,
    variant: DatasetVariant,
    max_retries: int = DEFAULT_MAX_RETRIES,
    node_cap: int = DEFAULT_NODE_CAP,
) -> MutatedVariant:
    """Mutate the goals of `bundle` and plan for the chosen true goal.

    The mutated goal set depends on the seed only, so the three variants
    generated with one seed share their candidate goals.
    """
    mutate_seed, select_seed, plan_seed = _child_seeds(variant.seed, 3)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter('always', GoalMutationWarning)
        goals = mutate_goal_set(bundle.goals, mutate_seed, max_retries)
    unmodified = bool(caught)
    for w in caught:
        warnings.warn(
            f'{bundle.name}: {w.message}', GoalMutationWarning, stacklevel=2
        )

    true_goal = select_true_goal(goals, variant.kind, select_seed)
    plan = plan_observations(
        bundle.problem, goals[true_goal], plan_seed, node_cap
    )
    meta = {
        'variant': variant.label,
        'seed': variant.seed,
        'source': bundle.name,
        'original_goal_sizes': [len(g) for g in bundle.goals],
        'goal_sizes': [len(g) for g in goals],
        'mutation_incomplete': unmodified,
    }
    logger.debug(
        '%s %s: true goal %d, %d observations',
        bundle.name,
        variant.label,
        true_goal,
        len(plan),
    )
    return MutatedVariant(tuple(goals), true_goal, tuple(plan), meta)


def write_variant(
    bundle: RecognitionBundle,
    variant: DatasetVariant,
    directory: str | Path,
    max_retries: int = DEFAULT_MAX_RETRIES,
    node_cap: int = DEFAULT_NODE_CAP,
) -> Path:
    """Generate a variant of `bundle` and write it as a bundle directory."""
    generated = generate_variant(bundle, variant, max_retries, node_cap)
    return write_bundle(
        directory,
        bundle.domain.to_pddl(),
        bundle.template.to_pddl(),
        generated.goals,
        generated.true_goal,
        generated.observations,
        generated.meta,
    )


def mutate_suite(
    root: str | Path,
    out: str | Path,
    seed: int,
    kinds: Iterable[VariantKind | str] = tuple(VariantKind),
    max_actions: int = DEFAULT_MAX_ACTIONS,
    max_retries: int = DEFAULT_MAX_RETRIES,
    node_cap: int = DEFAULT_NODE_CAP,
    progress: bool = False,
) -> list[Path]:
    """Write variants of every bundle under `root` into `out`.

    If `root` is a bundle itself, each variant is written to
    ``out/<variant>``. Otherwise the tree under `root` is mirrored into
    ``out/<variant>/``. Bundle seeds are derived from `seed` and the
    position of the bundle in sorted order.

    Returns
    -------
    list of Path
        The written bundle directories.
    """
    root = Path(root)
    out = Path(out)
    kinds = [VariantKind.parse(k) for k in kinds]
    paths = discover_bundles(root)
    seeds = _child_seeds(seed, len(paths))
    written = []
    for path, bundle_seed in zip(
        progress_bar(paths, 'Mutating', enable=progress), seeds
    ):
        bundle = load_bundle(path, max_actions)
        rel = path.relative_to(root)
        for kind in kinds:
            target = out / kind.value / rel
            variant = DatasetVariant(kind, bundle_seed)
            written.append(
                write_variant(bundle, variant, target, max_retries, node_cap)
            )
    logger.info('wrote %d bundles to %s', len(written), out)
    return written
