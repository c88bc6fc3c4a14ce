"""
Resource operations.

begin_operation,
end_operation,
sizeof_fmt

Long running steps are wrapped as
operation = begin_operation(name); ...; end_operation(operation)
and the result is kept next to their output.
"""
from __future__ import annotations

import time

import psutil

BINARY_PREFIXES = ['', 'Ki', 'Mi', 'Gi', 'Ti', 'Pi']


def begin_operation(name: str) -> dict:
    """
    Starts measuring an operation.

    Parameters
    ----------
    name: str
        Label of the operation

    Returns
    -------
    dict
        name, process handle, resident memory and start time

    Examples
    --------
    >>> from renvol.utils.mem import begin_operation
    >>> sorted(begin_operation('flow'))
    ['name', 'process', 'rss', 'start']
    """
    process = psutil.Process()
    return {
        'name': name,
        'process': process,
        'rss': process.memory_info().rss,
        'start': time.perf_counter(),
    }


def end_operation(operation: dict) -> dict:
    """
    Wall time and resident memory growth of an operation.

    Parameters
    ----------
    operation: dict
        Output of begin_operation

    Returns
    -------
    dict
        name, 'time in seconds' and 'memory' as a readable size
    """
    growth = operation['process'].memory_info().rss - operation['rss']
    return {
        'name': operation['name'],
        'time in seconds': time.perf_counter() - operation['start'],
        'memory': sizeof_fmt(growth),
    }


def sizeof_fmt(mem_usage: float, suffix: str = 'B') -> str:
    """
    Byte count with binary prefixes.

    Examples
    --------
    >>> from renvol.utils.mem import sizeof_fmt
    >>> sizeof_fmt(1024)
    '1.0 KiB'
    >>> sizeof_fmt(2e6)
    '1.9 MiB'
    """
    for prefix in BINARY_PREFIXES:
        if abs(mem_usage) < 1024.0:
            return f'{mem_usage:3.1f} {prefix}{suffix}'
        mem_usage /= 1024.0
    return f'{mem_usage:.1f} Ei{suffix}'
