"""Miscellaneous helper functions."""

from __future__ import annotations

from fractions import Fraction
from typing import TYPE_CHECKING

from prettytable import PrettyTable
from tqdm.auto import tqdm

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence
    from typing import TypeVar

    T = TypeVar('T')


def make_pretty_table(fields: Sequence[str], rows: Sequence) -> PrettyTable:
    """Make a :class:`prettytable.PrettyTable`.

    Parameters
    ----------
    fields : sequence of str
        The names of fields.
    rows : sequence
        The sequence of data corresponding to the `fields`.

    Returns
    -------
    table : PrettyTable
        The pretty table.
    """
    table = PrettyTable(
        fields,
        align='c',
        hrules=1,  # 1 for all, 0 for frame
        vrules=1,
        padding_width=1,
        vertical_char='│',
        horizontal_char='─',
        junction_char='┼',
        top_junction_char='┬',
        bottom_junction_char='┴',
        right_junction_char='┤',
        left_junction_char='├',
        top_right_junction_char='╮',
        top_left_junction_char='╭',
        bottom_right_junction_char='╯',
        bottom_left_junction_char='╰',
    )
    table.add_rows(rows)
    return table


def progress_bar(
    iterable: Iterable[T],
    desc: str,
    total: int | None = None,
    enable: bool = True,
) -> Iterable[T]:
    """Wrap `iterable` with a :mod:`tqdm` progress bar.

    Parameters
    ----------
    iterable : iterable
        The iterable to wrap.
    desc : str
        Description shown left of the bar.
    total : int, optional
        Number of expected items, if `iterable` has no length.
    enable : bool, optional
        If False, return `iterable` unchanged. The default is True.
    """
    if not enable:
        return iterable
    return tqdm(iterable, desc=desc, total=total, leave=False)


def format_decimal(value: Fraction | float | int, digits: int = 6) -> str:
    """Format a number as a decimal string with fixed fractional digits.

    Rationals are rounded exactly (half to even) so that the string does not
    depend on floating point conversion.

    Parameters
    ----------
    value : Fraction, float or int
        The number to format.
    digits : int, optional
        Number of fractional digits. The default is 6.

    Returns
    -------
    str
        The formatted number.
    """
    q = Fraction(value)
    scaled = round(q * 10**digits)
    sign = '-' if scaled < 0 else ''
    scaled = abs(scaled)
    integer, frac = divmod(scaled, 10**digits)
    if digits == 0:
        return f'{sign}{integer}'
    return f'{sign}{integer}.{frac:0{digits}d}'


def parse_bool(value: str) -> bool:
    """Parse a boolean flag value such as ``'true'``, ``'no'`` or ``'1'``."""
    v = str(value).strip().lower()
    if v in {'true', 't', 'yes', 'y', '1', 'on'}:
        return True
    if v in {'false', 'f', 'no', 'n', '0', 'off'}:
        return False
    raise ValueError(f'invalid boolean value: {value!r}')
