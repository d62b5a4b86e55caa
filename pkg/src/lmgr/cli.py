"""Command line interface of lmgr."""

from __future__ import annotations

import argparse
import contextlib
import itertools
import json
import logging
import math
import sys
from pathlib import Path
from typing import TYPE_CHECKING

from lmgr.__about__ import __version__
from lmgr.errors import ResourceLimitError, UnsolvableError
from lmgr.evaluation.goals import VariantKind, mutate_suite
from lmgr.evaluation.online import (
    DEFAULT_LAMBDAS,
    as_fraction,
    evaluate,
    load_problems,
)
from lmgr.evaluation.output import summary_table, write_csv, write_plot_data
from lmgr.landmarks.extract import DEFAULT_DISJUNCT_CAP, EXTRACTORS
from lmgr.landmarks.oracle import DEFAULT_STATE_CAP, LandmarkOracle
from lmgr.pddl.bundle import discover_bundles, format_goal, load_bundle
from lmgr.pddl.grounding import DEFAULT_MAX_ACTIONS
from lmgr.planning.search import DEFAULT_NODE_CAP
from lmgr.recognition.heuristics import HEURISTICS
from lmgr.recognition.recognizer import (
    RecognitionConfig,
    goal_landmarks,
    recognize,
)
from lmgr.util.config import set_log_level
from lmgr.util.misc import format_decimal, make_pretty_table, parse_bool

if TYPE_CHECKING:
    from collections.abc import Iterator, Sequence
    from typing import TextIO

__all__ = ['main', 'build_parser']

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_RESOURCE = 2


class _UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f'{self.prog}: error: {message}')


def _split(value: str) -> list[str]:
    items = [v.strip() for v in value.split(',') if v.strip()]
    if not items:
        raise argparse.ArgumentTypeError('expected a comma-separated list')
    return items


def _extractor_list(value: str) -> list[str]:
    items = [v.lower() for v in _split(value)]
    for v in items:
        if v not in EXTRACTORS:
            raise argparse.ArgumentTypeError(f'unknown extractor {v!r}')
    return items


def _heuristic_list(value: str) -> list[str]:
    items = [v.lower() for v in _split(value)]
    for v in items:
        if v not in HEURISTICS:
            raise argparse.ArgumentTypeError(f'unknown heuristic {v!r}')
    return items


def _bool_list(value: str) -> list[bool]:
    try:
        return [parse_bool(v) for v in _split(value)]
    except ValueError as err:
        raise argparse.ArgumentTypeError(str(err)) from err


def _lambda_value(value: str):
    try:
        lam = as_fraction(value)
    except (ValueError, ZeroDivisionError) as err:
        raise argparse.ArgumentTypeError(f'invalid lambda {value!r}') from err
    if not 0 <= lam <= 1:
        raise argparse.ArgumentTypeError(f'lambda {value} is not in [0, 1]')
    return lam


def _lambda_list(value: str):
    return [_lambda_value(v) for v in _split(value)]


def _variant_list(value: str) -> list[VariantKind]:
    try:
        return [VariantKind.parse(v) for v in _split(value)]
    except ValueError as err:
        raise argparse.ArgumentTypeError(str(err)) from err


def _positive_int(value: str) -> int:
    try:
        n = int(value)
    except ValueError as err:
        raise argparse.ArgumentTypeError(f'invalid integer {value!r}') from err
    if n <= 0:
        raise argparse.ArgumentTypeError(f'{value} is not positive')
    return n


@contextlib.contextmanager
def _output(path: str | None) -> Iterator[TextIO]:
    if path is None or path == '-':
        yield sys.stdout
        return
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open('w', encoding='utf-8', newline='') as f:
        yield f


def cmd_extract(args: argparse.Namespace) -> int:
    bundle = load_bundle(args.bundle, args.max_actions)
    sets = goal_landmarks(bundle, args.extractor, args.disjunct_cap)
    with _output(args.out) as f:
        for i, lms in enumerate(sets):
            for line in lms.to_json_lines(i):
                f.write(line + '\n')
    if args.summary:
        rows = []
        for i, lms in enumerate(sets):
            counts = lms.counts()
            rows.append([i, format_goal(bundle.goals[i]), *counts.values()])
        fields = ['Goal', 'Facts', *sets[0].counts().keys()]
        print(make_pretty_table(fields, rows), file=sys.stderr)
    return EXIT_OK


def cmd_recognize(args: argparse.Namespace) -> int:
    bundle = load_bundle(args.bundle, args.max_actions)
    cfg = RecognitionConfig(
        args.extractor, args.heuristic, args.init_landmarks
    )
    observations = bundle.observations
    prefix = observations[: math.floor(len(observations) * args.lam)]
    sets = goal_landmarks(bundle, cfg.extractor, args.disjunct_cap)
    scores, recognized = recognize(
        bundle, cfg, prefix, sets, threshold=args.threshold
    )
    result = {
        'bundle': bundle.name,
        'extractor': cfg.extractor,
        'heuristic': cfg.heuristic,
        'include_init': cfg.include_initial_state_landmarks,
        'lambda': format_decimal(args.lam),
        'observations': len(prefix),
        'scores': [
            {
                'goal_index': s.goal_index,
                'goal': format_goal(bundle.goals[s.goal_index]),
                'score': str(s.score),
                'value': format_decimal(s.score),
                'achieved': s.achieved_count,
                'total': s.total_count,
            }
            for s in scores
        ],
        'recognized': sorted(recognized),
        'true_goal': bundle.true_goal,
    }
    with _output(args.out) as f:
        f.write(json.dumps(result, indent=2) + '\n')
    return EXIT_OK


def cmd_evaluate(args: argparse.Namespace) -> int:
    paths = discover_bundles(args.bundles)
    if not paths:
        raise ValueError(f'no bundles found under {args.bundles}')
    problems = load_problems(paths, args.max_actions, args.progress)
    configs = [
        RecognitionConfig(e, h, i)
        for e, h, i in itertools.product(
            args.extractor, args.heuristic, args.include_init
        )
    ]
    rows = evaluate(
        problems,
        configs,
        args.lambdas,
        jobs=args.jobs,
        include_overall=args.overall,
        disjunct_cap=args.disjunct_cap,
        progress=args.progress,
    )
    with _output(args.out) as f:
        write_csv(rows, f)
    if args.plot_data is not None:
        write_plot_data(rows, args.plot_data)
    if not args.no_summary:
        print(summary_table(rows), file=sys.stderr)
    return EXIT_OK


def cmd_mutate(args: argparse.Namespace) -> int:
    written = mutate_suite(
        args.bundles,
        args.out,
        args.seed,
        args.variant,
        max_actions=args.max_actions,
        max_retries=args.max_retries,
        node_cap=args.node_cap,
        progress=args.progress,
    )
    for path in written:
        print(path)
    return EXIT_OK


def cmd_oracle_check(args: argparse.Namespace) -> int:
    bundle = load_bundle(args.bundle, args.max_actions)
    sets = {
        e: goal_landmarks(bundle, e, args.disjunct_cap)
        for e in args.extractor
    }
    violations = []
    report = []
    for i in range(len(bundle.goals)):
        oracle = LandmarkOracle(
            bundle.problem, bundle.goals[i], args.state_cap
        )
        for extractor in args.extractor:
            lms = sets[extractor][i]
            bad = oracle.violations(lms)
            violations += [(i, extractor, lm) for lm in bad]
            report.append(
                {
                    'goal_index': i,
                    'extractor': extractor,
                    'landmarks': len(lms),
                    'violations': [str(lm) for lm in bad],
                }
            )
    with _output(args.out) as f:
        for entry in report:
            f.write(json.dumps(entry) + '\n')
    for i, extractor, lm in violations:
        print(
            f'goal {i}: {extractor} landmark {lm} is avoided by some plan',
            file=sys.stderr,
        )
    return EXIT_INPUT if violations else EXIT_OK


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        '--max-actions',
        type=_positive_int,
        default=DEFAULT_MAX_ACTIONS,
        help='cap on grounded actions (default: %(default)s)',
    )
    p.add_argument(
        '--disjunct-cap',
        type=_positive_int,
        default=DEFAULT_DISJUNCT_CAP,
        help='largest disjunctive landmark of rhw (default: %(default)s)',
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog='lmgr',
        description='Planning landmark based goal recognition.',
    )
    parser.add_argument(
        '--version', action='version', version=f'%(prog)s {__version__}'
    )
    sub = parser.add_subparsers(
        dest='command', required=True, parser_class=_ArgumentParser
    )

    ex = sub.add_parser(
        'extract', help='extract the landmarks of every candidate goal'
    )
    ex.add_argument('--bundle', required=True, help='bundle directory')
    ex.add_argument(
        '--extractor',
        choices=sorted(EXTRACTORS),
        default='ex',
        help='landmark extractor (default: %(default)s)',
    )
    ex.add_argument(
        '--summary',
        action='store_true',
        help='print landmark counts per category to stderr',
    )
    ex.add_argument('--out', help='JSON lines output file (default: stdout)')
    _add_common(ex)
    ex.set_defaults(func=cmd_extract)

    rec = sub.add_parser(
        'recognize', help='score the candidate goals of one bundle'
    )
    rec.add_argument('--bundle', required=True, help='bundle directory')
    rec.add_argument(
        '--extractor',
        choices=sorted(EXTRACTORS),
        default='ex',
        help='landmark extractor (default: %(default)s)',
    )
    rec.add_argument(
        '--heuristic',
        choices=HEURISTICS,
        default='completion',
        help='scoring heuristic (default: %(default)s)',
    )
    rec.add_argument(
        '--lambda',
        dest='lam',
        type=_lambda_value,
        default=as_fraction(1),
        help='fraction of observations revealed (default: 1)',
    )
    group = rec.add_mutually_exclusive_group()
    group.add_argument(
        '--init-landmarks',
        dest='init_landmarks',
        action='store_true',
        help='keep initial-state landmarks, counted as achieved',
    )
    group.add_argument(
        '--no-init-landmarks',
        dest='init_landmarks',
        action='store_false',
        help='ignore initial-state landmarks (default)',
    )
    rec.set_defaults(init_landmarks=False)
    rec.add_argument(
        '--threshold',
        type=as_fraction,
        default=as_fraction(0),
        help='recognize goals within this score of the best (default: 0)',
    )
    rec.add_argument('--out', help='JSON output file (default: stdout)')
    _add_common(rec)
    rec.set_defaults(func=cmd_recognize)

    ev = sub.add_parser(
        'evaluate', help='online precision over a suite of bundles'
    )
    ev.add_argument(
        '--bundles', required=True, help='directory searched for bundles'
    )
    ev.add_argument(
        '--extractor',
        type=_extractor_list,
        default=['ex'],
        help='comma-separated extractors among ex, rhw, hm (default: ex)',
    )
    ev.add_argument(
        '--heuristic',
        type=_heuristic_list,
        default=['completion'],
        help='comma-separated heuristics among completion, uniqueness '
        '(default: completion)',
    )
    ev.add_argument(
        '--include-init',
        type=_bool_list,
        default=[False],
        help='comma-separated filter settings, e.g. true,false '
        '(default: false)',
    )
    ev.add_argument(
        '--lambda',
        dest='lambdas',
        type=_lambda_list,
        default=list(DEFAULT_LAMBDAS),
        help='comma-separated observation fractions '
        '(default: 0.1,0.2,...,1.0)',
    )
    ev.add_argument(
        '--jobs',
        type=_positive_int,
        default=None,
        help='worker processes (default: number of processors)',
    )
    ev.add_argument(
        '--overall',
        action='store_true',
        help="add rows of domain 'all' pooling every domain",
    )
    ev.add_argument('--out', help='CSV output file (default: stdout)')
    ev.add_argument(
        '--plot-data',
        help='directory for gnuplot data files per variant and heuristic',
    )
    ev.add_argument(
        '--no-summary',
        action='store_true',
        help='do not print the summary table to stderr',
    )
    ev.add_argument(
        '--progress', action='store_true', help='show progress bars'
    )
    _add_common(ev)
    ev.set_defaults(func=cmd_evaluate)

    mu = sub.add_parser(
        'mutate', help='generate D_R, D_L and D_S variants of bundles'
    )
    mu.add_argument(
        '--bundles', required=True, help='bundle or directory of bundles'
    )
    mu.add_argument('--out', required=True, help='output directory')
    mu.add_argument(
        '--seed', type=int, default=42, help='random seed (default: 42)'
    )
    mu.add_argument(
        '--variant',
        type=_variant_list,
        default=list(VariantKind),
        help='comma-separated variants among D_R, D_L, D_S (default: all)',
    )
    mu.add_argument(
        '--max-retries',
        type=_positive_int,
        default=1000,
        help='mutation draws per goal (default: %(default)s)',
    )
    mu.add_argument(
        '--node-cap',
        type=_positive_int,
        default=DEFAULT_NODE_CAP,
        help='planner expansion cap (default: %(default)s)',
    )
    mu.add_argument(
        '--max-actions',
        type=_positive_int,
        default=DEFAULT_MAX_ACTIONS,
        help='cap on grounded actions (default: %(default)s)',
    )
    mu.add_argument(
        '--progress', action='store_true', help='show progress bars'
    )
    mu.set_defaults(func=cmd_mutate)

    oc = sub.add_parser(
        'oracle-check',
        help='check extracted landmarks against plan enumeration',
    )
    oc.add_argument('--bundle', required=True, help='bundle directory')
    oc.add_argument(
        '--extractor',
        type=_extractor_list,
        default=sorted(EXTRACTORS),
        help='comma-separated extractors to check (default: all)',
    )
    oc.add_argument(
        '--state-cap',
        type=_positive_int,
        default=DEFAULT_STATE_CAP,
        help='largest number of explored states (default: %(default)s)',
    )
    oc.add_argument('--out', help='JSON lines report (default: stdout)')
    _add_common(oc)
    oc.set_defaults(func=cmd_oracle_check)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Run the command line interface and return the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as err:
        print(err, file=sys.stderr)
        return EXIT_INPUT
    except SystemExit as err:
        return int(err.code or 0)

    try:
        set_log_level()
        logger.debug('running %s', args.command)
        return args.func(args)
    except ResourceLimitError as err:
        print(f'lmgr: resource limit: {err}', file=sys.stderr)
        return EXIT_RESOURCE
    except (ValueError, OSError, UnsolvableError) as err:
        print(f'lmgr: error: {err}', file=sys.stderr)
        return EXIT_INPUT
