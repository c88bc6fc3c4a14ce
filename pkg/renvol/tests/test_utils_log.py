import logging

from numpy.testing import assert_equal

from renvol.utils import log


def test_deltatime_str():
    assert_equal(log.deltatime_str(1082.7180936336517), '18m:02.72s')
    assert_equal(log.deltatime_str(3.5), '03.50s')
    assert_equal(log.deltatime_str(3725.0), '01h:02m:05.00s')


def test_set_verbosity():
    previous = log.logger.level
    try:
        log.set_verbosity('WARNING')
        assert_equal(log.logger.level, logging.WARNING)
        assert_equal(log.shell_handler.level, logging.WARNING)
    finally:
        log.set_verbosity(previous)


def test_progress_bar_quiet():
    previous = log.logger.level
    try:
        log.set_verbosity('WARNING')
        sequence = [1, 2, 3]
        assert log.progress_bar(sequence) is sequence
    finally:
        log.set_verbosity(previous)


def test_timer_decorator():
    @log.timer_decorator
    def add(a, b):
        return a + b

    assert_equal(add(1, 2), 3)
    assert_equal(add.__name__, 'add')
