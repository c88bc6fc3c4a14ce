import numpy as np
from numpy.testing import assert_allclose, assert_almost_equal, assert_array_almost_equal
from pytest import raises

from renvol.utils import math
from renvol.utils.math import EVEN, ODD, ONESIDED


def test_fd_weights():
    assert_array_almost_equal(math.fd_weights((-1, 0, 1), 2), [1.0, -2.0, 1.0])
    assert_array_almost_equal(math.fd_weights((-1, 0, 1), 1), [-0.5, 0.0, 0.5])
    assert_array_almost_equal(
        math.fd_weights((-2, -1, 0, 1, 2), 1), np.array([1, -8, 0, 8, -1]) / 12
    )

    with raises(ValueError):
        math.fd_weights((0, 1), 2)


def test_derivatives_onesided_polynomial():
    x = np.linspace(0, 1, 17)
    h = x[1] - x[0]

    d1, d2 = math.derivatives(x ** 3 - 2 * x, h, ONESIDED)

    assert_allclose(d1, 3 * x ** 2 - 2, atol=1e-9)
    assert_allclose(d2, 6 * x, atol=1e-8)


def test_derivatives_even_ghosts():
    x = np.linspace(0, 1, 65)
    h = x[1] - x[0]

    d1, d2 = math.derivatives(np.cos(np.pi * x), h, EVEN)

    assert_allclose(d1, -np.pi * np.sin(np.pi * x), atol=1e-4)
    assert_allclose(d2, -np.pi ** 2 * np.cos(np.pi * x), atol=1e-3)
    assert_almost_equal(d1[-1], 0.0)


def test_derivatives_odd_ghosts():
    x = np.linspace(0, 1, 65)
    h = x[1] - x[0]

    d1, d2 = math.derivatives(np.sin(np.pi * x), h, ODD)

    assert_allclose(d1, np.pi * np.cos(np.pi * x), atol=1e-4)
    assert_allclose(d2, -np.pi ** 2 * np.sin(np.pi * x), atol=1e-3)
    assert_almost_equal(d2[-1], 0.0)


def test_axis_limit():
    x = np.linspace(0, 1, 65)
    values = np.cos(np.pi * x)
    values[-1] = np.nan

    assert_almost_equal(math.axis_limit(values), -1.0, decimal=10)
    assert_almost_equal(math.axis_limit(np.ones(5)), 1.0)
    # even polynomials up to degree 6 in the distance are exact
    t = np.arange(6.0)[::-1]
    assert_almost_equal(math.axis_limit(2 - t ** 2 + 3 * t ** 4 - t ** 6), 2.0)


def test_derivatives_invalid():
    with raises(ValueError):
        math.derivatives(np.ones(10), 0.1, 'periodic')
    with raises(ValueError):
        math.derivatives(np.ones(5), 0.1)


def test_limit_fit():
    eps = np.array([0.1, 0.2, 0.4, 0.8])

    coeffs, residual = math.limit_fit(eps, 2 + 3 * eps - eps ** 2, degree=2)

    assert_array_almost_equal(coeffs, [2.0, 3.0, -1.0])
    assert residual < 1e-10

    with raises(ValueError):
        math.limit_fit(eps[:2], eps[:2], degree=2)


def test_loglog_slope():
    x = np.geomspace(0.01, 0.1, 8)

    assert_almost_equal(math.loglog_slope(x, 5 * x ** 4), 4.0)
    assert_almost_equal(math.loglog_slope(x, -2 * x ** -3), -3.0)
