"""Load and store goal recognition benchmark bundles.

A bundle is a directory holding

    * ``domain.pddl``: the domain,
    * ``template.pddl``: the problem, with an empty or placeholder goal,
    * ``hyps.dat``: one candidate goal per line, facts separated by commas,
    * ``real_hyp.dat``: the true goal, equal to one line of ``hyps.dat``,
    * ``obs.dat``: one grounded action per line,
    * ``meta.json`` (optional): provenance of generated bundles.
"""

from __future__ import annotations

import json
import logging
import re
from pathlib import Path
from typing import TYPE_CHECKING

from lmgr.errors import BundleError, PDDLError
from lmgr.pddl.grounding import DEFAULT_MAX_ACTIONS, ground
from lmgr.pddl.parser import parse_domain, parse_problem
from lmgr.planning.strips import Fact

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

    from lmgr.pddl.parser import DomainAST, ProblemAST
    from lmgr.planning.strips import Action, GroundedProblem
    from lmgr.util.typing import Goals, State

__all__ = [
    'RecognitionBundle',
    'load_bundle',
    'write_bundle',
    'discover_bundles',
    'parse_fact_list',
    'format_goal',
]

logger = logging.getLogger(__name__)

DOMAIN_FILE = 'domain.pddl'
TEMPLATE_FILE = 'template.pddl'
HYPS_FILE = 'hyps.dat'
REAL_HYP_FILE = 'real_hyp.dat'
OBS_FILE = 'obs.dat'
META_FILE = 'meta.json'

_ATOM = re.compile(r'\(([^()]*)\)')


class RecognitionBundle:
    """A goal recognition problem ``R = <D, O, G>`` with its true goal.

    Parameters
    ----------
    name : str
        Bundle name, usually the directory name.
    domain : DomainAST
        The domain syntax tree.
    template : ProblemAST
        The problem syntax tree.
    problem : GroundedProblem
        The grounded problem; its goal is the template goal.
    goals : sequence of set of Fact
        Candidate goals G.
    true_goal : int
        Index of the true goal in `goals`.
    observations : sequence of Action
        Observed actions O in order.
    meta : dict, optional
        Bundle metadata.
    path : Path, optional
        Directory the bundle was loaded from.
    """

    def __init__(
        self,
        name: str,
        domain: DomainAST,
        template: ProblemAST,
        problem: GroundedProblem,
        goals: Sequence[State],
        true_goal: int,
        observations: Sequence[Action],
        meta: dict | None = None,
        path: Path | None = None,
    ):
        goals = tuple(frozenset(g) for g in goals)
        if not goals:
            raise ValueError(f'bundle {name} has no candidate goals')
        if not 0 <= true_goal < len(goals):
            raise ValueError(
                f'true goal index {true_goal} out of range for {len(goals)} '
                'candidate goals'
            )
        facts = set(problem.facts)
        for i, g in enumerate(goals):
            if not g <= facts:
                raise ValueError(f'candidate goal {i} uses facts outside F')
        self.name = str(name)
        self.domain = domain
        self.template = template
        self.problem = problem
        self.goals: Goals = goals
        self.true_goal = int(true_goal)
        self.observations: tuple[Action, ...] = tuple(observations)
        self.meta = dict(meta or {})
        self.path = path

    def __repr__(self) -> str:
        return (
            f'RecognitionBundle(name={self.name!r}, '
            f'domain={self.domain.name!r}, goals={len(self.goals)}, '
            f'observations={len(self.observations)})'
        )

    @property
    def init(self) -> State:
        """Initial state s0."""
        return self.problem.init

    @property
    def variant(self) -> str:
        """Dataset variant label, ``'original'`` if not generated."""
        return str(self.meta.get('variant', 'original'))

    def goal_problem(self, index: int) -> GroundedProblem:
        """Grounded problem whose goal is candidate goal `index`."""
        return self.problem.with_goal(self.goals[index])


def parse_fact_list(text: str) -> list[Fact]:
    """Parse facts such as ``(at c1), (at c2)`` into lower-cased facts.

    Raises
    ------
    ValueError
        If `text` contains anything besides parenthesized atoms and
        separators.
    """
    rest = _ATOM.sub('', text).replace(',', '').strip()
    if rest:
        raise ValueError(f'unexpected text {rest!r}')
    facts = []
    for body in _ATOM.findall(text):
        tokens = body.lower().split()
        if not tokens:
            raise ValueError('empty atom')
        facts.append(Fact(tokens[0], tuple(tokens[1:])))
    return facts


def format_goal(goal: Iterable[Fact]) -> str:
    """Format a goal as one ``hyps.dat`` line."""
    return ','.join(map(str, sorted(goal)))


def _read_lines(path: Path) -> list[tuple[int, str]]:
    if not path.is_file():
        raise BundleError('missing file', str(path))
    text = path.read_text(encoding='utf-8')
    return [
        (i, line.strip())
        for i, line in enumerate(text.splitlines(), start=1)
        if line.strip()
    ]


def _parse_goal_line(path: Path, lineno: int, line: str) -> State:
    try:
        facts = parse_fact_list(line)
    except ValueError as err:
        raise BundleError(str(err), str(path), lineno) from err
    if not facts:
        raise BundleError('empty goal', str(path), lineno)
    return frozenset(facts)


def load_bundle(
    directory: str | Path,
    max_actions: int = DEFAULT_MAX_ACTIONS,
) -> RecognitionBundle:
    """Load a bundle directory.

    The domain and template are parsed, the problem is grounded once with
    all candidate goal facts retained, and every observation is resolved to
    a grounded action.

    Parameters
    ----------
    directory : str or Path
        The bundle directory.
    max_actions : int, optional
        Grounding cap passed to :func:`~lmgr.pddl.grounding.ground`.

    Returns
    -------
    RecognitionBundle
        The loaded bundle.

    Raises
    ------
    BundleError
        If a file is missing, a hypothesis uses unknown symbols, the true
        goal is not a candidate goal, or an observation does not resolve
        to a grounded action.
    """
    path = Path(directory)
    domain_path = path / DOMAIN_FILE
    template_path = path / TEMPLATE_FILE
    for p in (domain_path, template_path):
        if not p.is_file():
            raise BundleError('missing file', str(p))

    try:
        domain = parse_domain(domain_path.read_text(encoding='utf-8'))
    except PDDLError as err:
        raise BundleError(err.msg, str(domain_path), err.line) from err
    try:
        template = parse_problem(
            template_path.read_text(encoding='utf-8'), domain
        )
    except PDDLError as err:
        raise BundleError(err.msg, str(template_path), err.line) from err

    hyps_path = path / HYPS_FILE
    hyps = _read_lines(hyps_path)
    goals = [_parse_goal_line(hyps_path, i, line) for i, line in hyps]
    if not goals:
        raise BundleError('no candidate goals', str(hyps_path))

    real_path = path / REAL_HYP_FILE
    real = _read_lines(real_path)
    if len(real) != 1:
        raise BundleError(
            f'expected exactly one line, got {len(real)}', str(real_path)
        )
    true = _parse_goal_line(real_path, *real[0])
    if true not in goals:
        raise BundleError(
            'true goal is not among the candidate goals', str(real_path), 1
        )
    true_goal = goals.index(true)

    try:
        problem = ground(domain, template, goals, max_actions)
    except PDDLError as err:
        raise BundleError(err.msg, str(hyps_path)) from err

    obs_path = path / OBS_FILE
    observations = []
    for i, line in _read_lines(obs_path):
        try:
            parsed = parse_fact_list(line)
        except ValueError as err:
            raise BundleError(str(err), str(obs_path), i) from err
        if len(parsed) != 1:
            raise BundleError(
                'expected one action per line', str(obs_path), i
            )
        name, args = parsed[0]
        action = problem.find_action(name, args)
        if action is None:
            raise BundleError(
                f'observation {line} does not resolve to a grounded action',
                str(obs_path),
                i,
            )
        observations.append(action)

    meta = {}
    meta_path = path / META_FILE
    if meta_path.is_file():
        meta = json.loads(meta_path.read_text(encoding='utf-8'))

    logger.debug(
        'loaded bundle %s: %d goals, %d observations',
        path.name,
        len(goals),
        len(observations),
    )
    return RecognitionBundle(
        path.name,
        domain,
        template,
        problem,
        goals,
        true_goal,
        observations,
        meta,
        path,
    )


def write_bundle(
    directory: str | Path,
    domain_text: str,
    template_text: str,
    goals: Sequence[Iterable[Fact]],
    true_goal: int,
    observations: Iterable[Action],
    meta: dict | None = None,
) -> Path:
    """Write a bundle directory.

    Parameters
    ----------
    directory : str or Path
        The target directory, created if missing.
    domain_text, template_text : str
        Contents of ``domain.pddl`` and ``template.pddl``.
    goals : sequence of fact collections
        Candidate goals.
    true_goal : int
        Index of the true goal in `goals`.
    observations : iterable of Action
        The observed actions.
    meta : dict, optional
        Written to ``meta.json`` with sorted keys if given.

    Returns
    -------
    Path
        The bundle directory.
    """
    path = Path(directory)
    path.mkdir(parents=True, exist_ok=True)
    lines = [format_goal(g) for g in goals]
    (path / DOMAIN_FILE).write_text(domain_text, encoding='utf-8')
    (path / TEMPLATE_FILE).write_text(template_text, encoding='utf-8')
    (path / HYPS_FILE).write_text('\n'.join(lines) + '\n', encoding='utf-8')
    (path / REAL_HYP_FILE).write_text(
        lines[true_goal] + '\n', encoding='utf-8'
    )
    obs = ''.join(f'{a}\n' for a in observations)
    (path / OBS_FILE).write_text(obs, encoding='utf-8')
    if meta is not None:
        (path / META_FILE).write_text(
            json.dumps(meta, indent=2, sort_keys=True) + '\n',
            encoding='utf-8',
        )
    return path


def discover_bundles(root: str | Path) -> list[Path]:
    """Return every directory under `root` holding a ``domain.pddl``,
    sorted by path."""
    root = Path(root)
    if not root.is_dir():
        raise BundleError('not a directory', str(root))
    found = {p.parent for p in root.rglob(DOMAIN_FILE)}
    return sorted(found)
