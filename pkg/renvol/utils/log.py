"""
Logging operations.

deltatime_str
progress_bar
set_verbosity
timer_decorator

The package logger is named 'renvol' and reads its level from
RENVOL_VERBOSE.
"""
from __future__ import annotations

import logging
import os
import time
from functools import wraps
from typing import Callable, Iterable

from tqdm import tqdm

LOG_LEVEL = os.getenv('RENVOL_VERBOSE', 'INFO')
logger = logging.getLogger('renvol')
shell_handler = logging.StreamHandler()
shell_handler.setFormatter(logging.Formatter('%(levelname)s %(name)s: %(message)s'))
logger.setLevel(LOG_LEVEL)
shell_handler.setLevel(LOG_LEVEL)
logger.addHandler(shell_handler)

BAR_UPDATES = 200


def set_verbosity(level: int | str):
    """Change logging level."""
    logger.setLevel(level)
    shell_handler.setLevel(level)


def deltatime_str(deltatime_seconds: float) -> str:
    """
    Elapsed seconds as hours, minutes and seconds.

    Leading fields that are zero are left out.

    Examples
    --------
    >>> from renvol.utils.log import deltatime_str
    >>> deltatime_str(1082.7180936336517)
    '18m:02.72s'
    >>> deltatime_str(3.5)
    '03.50s'
    """
    minutes, seconds = divmod(deltatime_seconds, 60)
    hours, minutes = divmod(int(minutes), 60)
    fields = [f'{hours:0>2}h', f'{minutes:0>2}m'][(0 if hours else 1 if minutes else 2):]
    return ':'.join(fields + [f'{seconds:05.2f}s'])


def timer_decorator(func: Callable) -> Callable:
    """Logs the wall time of each call at debug level."""

    @wraps(func)
    def wrapper(*args, **kwargs):
        t_start = time.perf_counter()
        result = func(*args, **kwargs)
        logger.debug(
            f'...{func.__qualname__} took {deltatime_str(time.perf_counter() - t_start)}'
        )
        return result

    return wrapper


def progress_bar(sequence: Iterable, desc: str | None = None, total: int | None = None):
    """
    Wraps a loop in a tqdm bar.

    Loops run bare when the package logger is above INFO, so sweeps and
    flows stay quiet under `RENVOL_VERBOSE=WARNING`.

    Parameters
    ----------
    sequence : iterable
        Loop items
    desc : str, optional
        Label of the bar, by default None
    total : int, optional
        Number of items when sequence has no length, by default None

    Returns
    -------
    iterable
        The sequence itself or a tqdm wrapper around it
    """
    if logger.level > logging.INFO:
        return sequence
    if total is None and hasattr(sequence, '__len__'):
        total = len(sequence)  # type: ignore[arg-type]
    miniters = 1 if total is None else max(1, total // BAR_UPDATES)
    return tqdm(sequence, desc=desc, total=total, miniters=miniters, leave=False)
