"""Helper functions for runtime environment configuration."""

from __future__ import annotations

import logging
import os
import warnings
from multiprocessing import cpu_count

__all__ = ['set_log_level', 'get_parallel_number']

_LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'


def _level_number(level: str | int) -> int | None:
    if not isinstance(level, str):
        return int(level)
    name = level.strip().upper()
    if name.isdigit():
        return int(name)
    numeric = logging.getLevelName(name)
    return numeric if isinstance(numeric, int) else None


def set_log_level(level: str | int | None = None) -> int:
    """Set the verbosity of the ``lmgr`` loggers.

    Parameters
    ----------
    level : str or int, optional
        Either a level name such as ``'DEBUG'`` or ``'info'``, or a numeric
        level. If None, the ``LMGR_LOG`` environment variable is read, and
        ``'WARNING'`` is used if it is undefined or not a level name.

    Returns
    -------
    int
        The numeric level that was set.

    Raises
    ------
    ValueError
        If `level` is given and is not a known level name.
    """
    if level is None:
        value = os.getenv('LMGR_LOG', 'WARNING')
        numeric = _level_number(value)
        if numeric is None:
            warnings.warn(
                f'unknown log level {value!r} in LMGR_LOG, using WARNING',
                Warning,
            )
            numeric = logging.WARNING
    else:
        numeric = _level_number(level)
        if numeric is None:
            raise ValueError(f'unknown log level: {level}')

    logger = logging.getLogger('lmgr')
    logger.setLevel(numeric)
    if not logger.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(_LOG_FORMAT))
        logger.addHandler(handler)
    return numeric


def get_parallel_number(n: int | None) -> int:
    """Check and return the available number of worker processes.

    Parameters
    ----------
    n : int, optional
        The desired number of worker processes. If None, the number of
        processors is used.

    Returns
    -------
    int
        The available number of worker processes.
    """
    n_max = cpu_count()

    if n is None:
        return n_max
    else:
        n = int(n)
        if n <= 0:
            raise ValueError(
                f'number of parallel processes must be positive, got {n}'
            )

    if n > n_max:
        warnings.warn(
            f'number of parallel processes ({n}) is more than the number of '
            f'available processors ({n_max}), reset to {n_max}',
            Warning,
        )
        n = n_max

    return n
