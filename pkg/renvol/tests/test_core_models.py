from math import pi

import numpy as np
from numpy.testing import assert_almost_equal, assert_array_almost_equal, assert_equal
from pytest import raises

from renvol.core import models
from renvol.core.grid import make_grid
from renvol.core.metric import BoundaryRep
from renvol.utils.constants import CIRCLE_COLLAPSE, POINT_COLLAPSE, SPHERE_COLLAPSE, TANH


def _default_grid():
    return make_grid(65, TANH)


def test_hyperbolic_ball():
    metric = models.hyperbolic_ball(_default_grid())

    assert_equal(metric.ansatz.variant, POINT_COLLAPSE)
    assert metric.vbar is None
    assert_almost_equal(metric.ubar[0], 1.0)
    assert_almost_equal(metric.wbar[0], 1.0)
    assert_almost_equal(metric.wbar[-1], 0.0)
    assert_equal(metric.default_rep(), BoundaryRep(1.0))


def test_thermal_hyperbolic():
    metric = models.thermal_hyperbolic(pi / 2, _default_grid())

    assert_equal(metric.ansatz.variant, SPHERE_COLLAPSE)
    assert_almost_equal(metric.beta, pi / 2)
    assert_array_almost_equal(
        [metric.ubar[0], metric.vbar[0], metric.wbar[0]], [1.0, 1.0, 1.0]
    )
    assert_almost_equal(metric.wbar[-1], 0.0)
    assert_almost_equal(metric.vbar[-1], 1.0)
    assert_equal(metric.default_rep(), BoundaryRep(1.0, pi / 2))


def test_ads_parameters():
    assert_almost_equal(models.ads_mass(1.0), 1.0)
    assert_almost_equal(models.ads_mass(2.0), 5.0)
    assert_almost_equal(models.ads_beta(1.0), pi)
    assert_almost_equal(models.ads_beta(1 / 3), pi)
    assert_almost_equal(models.ads_radius(0.5, np.array([0.5, 1.0])), [2 / 3, 0.5])


def test_ads_schwarzschild():
    a = 0.5
    metric = models.ads_schwarzschild(a, _default_grid())

    assert_equal(metric.ansatz.variant, CIRCLE_COLLAPSE)
    assert_almost_equal(metric.beta, models.ads_beta(a))
    assert_almost_equal(metric.ubar[0], 1.0)
    assert_almost_equal(metric.vbar[0], a ** 2 / 4)
    assert_almost_equal(metric.wbar[0], a ** 2 / 4)
    assert_almost_equal(metric.vbar[-1], 0.0)
    assert_equal(metric.default_rep(), BoundaryRep(1.0, metric.beta))


def test_ads_schwarzschild_areal_radius():
    a = 2.0
    grid = _default_grid()
    metric = models.ads_schwarzschild(a, grid)
    s = grid.points[1:-1]

    # r^2 = Wbar / s^2 and V = Vbar / s^2 = 1 + r^2 - 2m / r, V = 0 on the horizon
    r = np.sqrt(metric.wbar[1:-1]) / s
    assert_array_almost_equal(r, models.ads_radius(a, s))
    potential = 1 + r ** 2 - 2 * models.ads_mass(a) / r
    assert_array_almost_equal(metric.vbar[1:-1] / s ** 2 / potential, np.ones(s.size))


def test_ads_schwarzschild_invalid():
    with raises(ValueError):
        models.ads_schwarzschild(0.0, _default_grid())
