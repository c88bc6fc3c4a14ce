import numpy as np
from numpy.testing import assert_almost_equal, assert_array_almost_equal, assert_equal
from pytest import raises

from renvol.core.grid import RadialGrid, make_grid
from renvol.utils.constants import TANH, UNIFORM
from renvol.utils.errors import TooCoarse


def _default_grid():
    return make_grid(65, TANH)


def test_make_grid_uniform():
    grid = make_grid(17)

    assert_equal(grid.clustering, UNIFORM)
    assert_array_almost_equal(grid.points[:3], [0.0, 0.0625, 0.125])
    assert_almost_equal(grid.h, 1 / 16)
    assert_array_almost_equal(grid.ds, np.ones(17))
    assert_array_almost_equal(grid.d2s, np.zeros(17))


def test_tanh_clustering():
    grid = _default_grid()
    points = grid.points

    assert_equal(points[0], 0.0)
    assert_equal(points[-1], 1.0)
    assert np.all(np.diff(points) > 0)
    assert points[1] < grid.h
    assert_array_almost_equal(grid.sigma_of_s(points), grid.sigma)


def test_tanh_map_derivatives():
    grid = _default_grid()
    sigma = np.linspace(0.1, 0.9, 9)
    step = 1e-5

    numeric = (grid.s_of_sigma(sigma + step) - grid.s_of_sigma(sigma - step)) / (2 * step)
    assert_array_almost_equal(grid.ds_dsigma(sigma), numeric, decimal=6)

    numeric = (
        grid.ds_dsigma(sigma + step) - grid.ds_dsigma(sigma - step)
    ) / (2 * step)
    assert_array_almost_equal(grid.d2s_dsigma2(sigma), numeric, decimal=5)


def test_tanh_map_is_odd_about_collapse():
    grid = _default_grid()
    t = np.linspace(0, 0.2, 5)

    assert_array_almost_equal(
        grid.s_of_sigma(1 + t) - 1, 1 - grid.s_of_sigma(1 - t)
    )


def test_tolerance():
    grid = make_grid(101)

    assert_almost_equal(grid.tolerance(), 10 * 0.01 ** 2)
    assert_almost_equal(grid.tolerance(2.0), 2 * 0.01 ** 2)


def test_to_dict_from_dict():
    grid = _default_grid()

    data = grid.to_dict()

    assert_equal(data, {'N': 65, 'clustering': TANH, 'stretch': 2.0})
    assert_equal(RadialGrid.from_dict(data), grid)


def test_invalid_grid():
    with raises(TooCoarse):
        make_grid(8)
    with raises(ValueError):
        make_grid(33, 'log')
    with raises(ValueError):
        make_grid(33, TANH, stretch=0.0)
