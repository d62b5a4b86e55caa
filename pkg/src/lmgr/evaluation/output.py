"""Serialization and summaries of evaluation rows."""

from __future__ import annotations

import csv
import io
from collections import defaultdict
from fractions import Fraction
from pathlib import Path
from typing import TYPE_CHECKING, TextIO

from lmgr.util.misc import format_decimal, make_pretty_table

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

    from prettytable import PrettyTable

    from lmgr.evaluation.online import EvaluationRow

__all__ = [
    'CSV_FIELDS',
    'rows_to_csv',
    'write_csv',
    'write_plot_data',
    'mean_over_lambda',
    'summary_table',
]

CSV_FIELDS = (
    'domain',
    'variant',
    'extractor',
    'heuristic',
    'include_init',
    'lambda',
    'precision',
    'n_problems',
)


def _config_label(extractor: str, include_init: bool) -> str:
    return extractor.upper() + ('-init' if include_init else '')


def rows_to_csv(rows: Iterable[EvaluationRow]) -> str:
    """Format rows as CSV text with 6 fractional digits."""
    buffer = io.StringIO()
    write_csv(rows, buffer)
    return buffer.getvalue()


def write_csv(rows: Iterable[EvaluationRow], file: TextIO) -> None:
    """Write rows as CSV to an open text file."""
    writer = csv.writer(file, lineterminator='\n')
    writer.writerow(CSV_FIELDS)
    for r in rows:
        writer.writerow(
            [
                r.domain,
                r.variant,
                r.extractor,
                r.heuristic,
                'true' if r.include_init else 'false',
                format_decimal(r.lam),
                format_decimal(r.precision),
                r.n_problems,
            ]
        )


def write_plot_data(
    rows: Sequence[EvaluationRow], directory: str | Path
) -> list[Path]:
    """Write one gnuplot data file per variant and heuristic.

    Each file holds one block per domain, separated by two blank lines so
    that gnuplot's ``index`` selects a domain. A block has one line per
    lambda and one precision column per extractor and filter setting.

    Returns
    -------
    list of Path
        The written files, named ``<variant>_<heuristic>.dat``.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    tables: dict[tuple[str, str], dict] = defaultdict(
        lambda: defaultdict(dict)
    )
    for r in rows:
        label = _config_label(r.extractor, r.include_init)
        tables[r.variant, r.heuristic][r.domain][r.lam, label] = r.precision

    written = []
    for (variant, heuristic), domains in sorted(tables.items()):
        blocks = []
        for domain in sorted(domains):
            values = domains[domain]
            labels = sorted({label for _, label in values})
            lambdas = sorted({lam for lam, _ in values})
            lines = [f'# domain {domain}', '# lambda ' + ' '.join(labels)]
            for lam in lambdas:
                cols = [
                    format_decimal(values[lam, label])
                    if (lam, label) in values
                    else 'NaN'
                    for label in labels
                ]
                lines.append(' '.join([format_decimal(lam), *cols]))
            blocks.append('\n'.join(lines))
        path = directory / f'{variant}_{heuristic}.dat'
        path.write_text('\n\n\n'.join(blocks) + '\n', encoding='utf-8')
        written.append(path)
    return written


def mean_over_lambda(
    rows: Iterable[EvaluationRow], domain: str | None = None
) -> dict[tuple[str, str, str, bool], Fraction]:
    """Precision averaged over lambda per variant, extractor, heuristic and
    filter setting.

    Rows of different domains are pooled by their problem counts. If
    `domain` is given, only its rows are used; otherwise the rows of the
    ``'all'`` domain are skipped.
    """
    weighted = defaultdict(lambda: defaultdict(lambda: [Fraction(0), 0]))
    for r in rows:
        if domain is None and r.domain == 'all':
            continue
        if domain is not None and r.domain != domain:
            continue
        acc = weighted[r.config_key][r.lam]
        acc[0] += r.precision * r.n_problems
        acc[1] += r.n_problems
    result = {}
    for key, by_lambda in weighted.items():
        means = [total / n for total, n in by_lambda.values()]
        result[key] = sum(means, Fraction(0)) / len(means)
    return result


def summary_table(rows: Iterable[EvaluationRow]) -> PrettyTable:
    """Table of :func:`mean_over_lambda` over every domain."""
    means = mean_over_lambda(rows)
    table_rows = [
        [
            variant,
            _config_label(extractor, include_init),
            heuristic,
            format_decimal(value, 3),
        ]
        for (variant, extractor, heuristic, include_init), value in sorted(
            means.items()
        )
    ]
    return make_pretty_table(
        ['Variant', 'Recognizer', 'Heuristic', 'Mean Precision'], table_rows
    )
