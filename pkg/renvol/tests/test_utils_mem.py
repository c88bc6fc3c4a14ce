import os

import psutil
from numpy.testing import assert_equal

from renvol.utils import mem


def test_begin_operation():
    operation = mem.begin_operation('flow')

    assert_equal(operation['name'], 'flow')
    assert_equal(operation['process'].pid, os.getpid())
    assert operation['rss'] > 0
    assert isinstance(operation['process'], psutil.Process)


def test_end_operation():
    operation = mem.begin_operation('flow')
    buffer = bytearray(1 << 20)

    finish = mem.end_operation(operation)

    assert_equal(sorted(finish), ['memory', 'name', 'time in seconds'])
    assert_equal(finish['name'], 'flow')
    assert finish['time in seconds'] >= 0
    assert finish['memory'].endswith('B')
    del buffer


def test_sizeof_fmt():
    assert_equal(mem.sizeof_fmt(1024), '1.0 KiB')
    assert_equal(mem.sizeof_fmt(2e6), '1.9 MiB')
    assert_equal(mem.sizeof_fmt(512), '512.0 B')
    assert_equal(mem.sizeof_fmt(-2048), '-2.0 KiB')
