import numpy as np
from numpy.testing import assert_allclose, assert_almost_equal, assert_equal
from pytest import raises

from renvol.core.bdf import bdf_residual, graham_lee_normalize, special_bdf
from renvol.core.grid import make_grid
from renvol.core.metric import BoundaryRep
from renvol.core.models import ads_schwarzschild, hyperbolic_ball, thermal_hyperbolic
from renvol.utils.constants import NORMAL_CHART, TANH
from renvol.utils.errors import NonAHMetric, UnsupportedBoundary


def _default_grid():
    return make_grid(257, TANH)


def test_special_bdf_hyperbolic_ball():
    grid = _default_grid()
    s = grid.points

    bdf = special_bdf(hyperbolic_ball(grid))

    assert_allclose(bdf.x, 2 * s / (2 - s), atol=1e-8)
    assert_allclose(bdf.x_over_s, 2 / (2 - s), atol=1e-8)
    assert_almost_equal(bdf.x_max, 2.0, decimal=8)


def test_special_bdf_thermal_hyperbolic():
    grid = _default_grid()
    s = grid.points

    bdf = special_bdf(thermal_hyperbolic(np.pi / 2, grid))

    assert_allclose(bdf.x, 2 * s / (2 - s), atol=1e-8)


def test_special_bdf_scaling():
    metric = hyperbolic_ball(_default_grid())

    bdf = special_bdf(metric, BoundaryRep(2.0))

    assert_almost_equal(bdf.x_max, 4.0, decimal=7)


def test_special_bdf_inverse_maps():
    bdf = special_bdf(hyperbolic_ball(_default_grid()))
    sigma = np.linspace(0.05, 0.95, 7)

    assert_allclose(bdf.sigma_of_x(bdf.x_of_sigma(sigma)), sigma, atol=1e-8)


def test_bdf_residual():
    for metric in (
        hyperbolic_ball(_default_grid()),
        ads_schwarzschild(0.7, _default_grid()),
    ):
        assert bdf_residual(metric) < 1e-6


def test_special_bdf_errors():
    metric = hyperbolic_ball(_default_grid())

    with raises(NonAHMetric):
        special_bdf(metric.replace(ubar=2 * metric.ubar))
    with raises(UnsupportedBoundary):
        special_bdf(metric, BoundaryRep(1.0, 2.0))
    with raises(ValueError):
        special_bdf(thermal_hyperbolic(2.0, _default_grid()), BoundaryRep(1.0, 3.0))


def test_graham_lee_normalize_ball():
    grid = _default_grid()
    s = grid.points

    normal = graham_lee_normalize(hyperbolic_ball(grid))

    assert_equal(normal.chart, NORMAL_CHART)
    assert_almost_equal(normal.x_scale, 2.0, decimal=8)
    assert_allclose(normal.ubar, np.ones(grid.n))
    assert_allclose(normal.wbar, (1 - s ** 2) ** 2 / 4, atol=1e-6)
