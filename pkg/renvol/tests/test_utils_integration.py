import numpy as np
from numpy.testing import assert_almost_equal, assert_array_almost_equal

from renvol.utils import integration


def test_gauss_legendre():
    nodes, weights = integration.gauss_legendre(3)

    assert_almost_equal(weights.sum(), 2.0)
    assert_array_almost_equal(nodes, -nodes[::-1])
    assert_almost_equal(np.sum(weights * nodes ** 4), 2 / 5)


def test_panel_quadrature():
    value = integration.panel_quadrature(np.sin, np.linspace(0, np.pi, 5))

    assert_almost_equal(value, 2.0, decimal=7)
    assert integration.panel_quadrature(np.sin, np.array([1.0])) == 0.0


def test_breakpoints_between():
    breakpoints = integration.breakpoints_between(np.linspace(0, 1, 5), 0.1, 0.6)

    assert_array_almost_equal(breakpoints, [0.1, 0.25, 0.5, 0.6])


def test_cumulative_integral():
    x = np.linspace(0, 1, 11)

    running = integration.cumulative_integral(x, 2 * x)

    assert_array_almost_equal(running, x ** 2, decimal=10)


def test_polynomial_tail():
    x = np.linspace(1, 3, 9)

    tail = integration.polynomial_tail(x, 1 + x, 1.0)

    assert_almost_equal(tail, 1.5)
