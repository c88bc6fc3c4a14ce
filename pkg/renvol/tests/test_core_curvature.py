import numpy as np
import sympy as sp
from numpy.testing import assert_allclose, assert_equal
from pytest import raises

from renvol.core.curvature import (
    ape_residual,
    bianchi_residual,
    check_positive,
    curvature_of,
    laplacian,
)
from renvol.core.grid import make_grid
from renvol.core.models import (
    ads_mass,
    ads_radius,
    ads_schwarzschild,
    hyperbolic_ball,
    thermal_hyperbolic,
)
from renvol.flow.perturbation import PerturbationSpec, perturb
from renvol.utils.constants import BUMP, TANH
from renvol.utils.errors import DegenerateMetric


def _default_grid(n=257):
    return make_grid(n, TANH)


def _inner(s):
    return (s > 0.02) & (s < 0.9)


def _ads_oracle(a):
    """Sectional curvatures of dr^2 / V + V dtau^2 + r^2 g_S2."""
    r = sp.symbols('r', positive=True)
    m = (a ** 3 + a) / 2
    potential = 1 + r ** 2 - 2 * m / r

    def d(f):
        return sp.sqrt(potential) * sp.diff(f, r)

    phi_t, phi_s = sp.sqrt(potential), r
    curvatures = {
        'radial_V': -d(d(phi_t)) / phi_t,
        'radial_W': -d(d(phi_s)) / phi_s,
        'self_W': (1 - d(phi_s) ** 2) / phi_s ** 2,
        'cross': -d(phi_t) * d(phi_s) / (phi_t * phi_s),
    }
    return {k: sp.lambdify(r, sp.simplify(v), 'numpy') for k, v in curvatures.items()}


def test_hyperbolic_models_constant_curvature():
    grid = _default_grid()
    inner = _inner(grid.points)
    for metric in (hyperbolic_ball(grid), thermal_hyperbolic(np.pi / 2, grid)):
        fields = curvature_of(metric)

        assert_allclose(fields.sc[inner], -12.0, atol=1e-6)
        assert_allclose(fields.rm2[inner], 24.0, atol=1e-5)
        assert_allclose(fields.e_norm[inner], 0.0, atol=1e-6)
        assert_allclose(fields.sc, -12.0, atol=1e-2)
        assert_allclose(fields.scalar_gap, fields.tr_e, atol=1e-10)
        for k in fields.k_radial.values():
            assert_allclose(k[inner], -1.0, atol=1e-6)


def test_hyperbolic_models_every_node():
    grid = _default_grid(2048)
    for metric in (hyperbolic_ball(grid), thermal_hyperbolic(np.pi / 2, grid)):
        fields = curvature_of(metric)

        assert_allclose(fields.sc, -12.0, atol=1e-6)
        assert_allclose(fields.rm2, 24.0, atol=1e-6)
        assert np.max(fields.e_norm) <= 1e-6


def test_ads_schwarzschild_einstein_error_converges():
    errors = [
        np.max(curvature_of(ads_schwarzschild(0.7, _default_grid(n))).e_norm)
        for n in (65, 129)
    ]

    assert np.all(np.isfinite(errors))
    assert errors[0] >= 4 * errors[1]


def test_ads_schwarzschild_sectional_curvatures():
    a = 0.5
    grid = _default_grid()
    metric = ads_schwarzschild(a, grid)
    inner = _inner(grid.points)
    r = ads_radius(a, grid.points[inner])
    oracle = _ads_oracle(a)

    fields = curvature_of(metric)

    # radial_V and self_W change sign inside
    tol = {'rtol': 1e-6, 'atol': 1e-7}
    assert_allclose(fields.k_radial['V'][inner], oracle['radial_V'](r), **tol)
    assert_allclose(fields.k_radial['W'][inner], oracle['radial_W'](r), **tol)
    assert_allclose(fields.k_self['W'][inner], oracle['self_W'](r), **tol)
    assert_allclose(fields.k_cross[('V', 'W')][inner], oracle['cross'](r), **tol)
    assert_allclose(
        fields.k_radial['V'][inner], -1 + 2 * ads_mass(a) / r ** 3, **tol
    )


def test_ads_schwarzschild_is_einstein():
    grid = _default_grid()
    inner = _inner(grid.points)

    fields = curvature_of(ads_schwarzschild(2.0, grid))

    assert_allclose(fields.e_norm[inner], 0.0, atol=1e-5)
    assert_allclose(fields.sc[inner], -12.0, atol=1e-5)
    assert np.all(fields.rm2[grid.points > 0.3] > 24.0)


def test_curvature_serialization():
    fields = curvature_of(thermal_hyperbolic(2.0, _default_grid(33)))

    data = fields.to_dict()

    assert_equal(
        sorted(data), ['E', 'E_r', 'Ric', 'Ric_r', 'Rm2', 'Sc', 'Z2', 'scalarGap', 'trE']
    )
    assert_equal(sorted(data['Ric']), ['V', 'W'])
    assert_equal(len(data['Sc']), 33)


def test_laplacian_ball():
    grid = _default_grid()
    t = 1 - grid.points
    inner = _inner(grid.points)
    # sech(r) with r = 2 artanh(1 - s)
    f = (1 - t ** 2) / (1 + t ** 2)

    result = laplacian(hyperbolic_ball(grid), f)

    assert_allclose(result[inner], -2 * f[inner] * (1 + f[inner] ** 2), atol=1e-6)
    # on the axis sech has f_rr = -1, so Delta f = 4 f_rr
    assert_allclose(result[-1], -4.0, atol=1e-6)
    assert_allclose(result[-4:], -2 * f[-4:] * (1 + f[-4:] ** 2), atol=1e-5)


def test_bianchi_residual_converges():
    spec = PerturbationSpec(BUMP, 0.1, center=0.5, width=0.3)
    coarse = perturb(hyperbolic_ball(_default_grid(129)), spec)
    fine = perturb(hyperbolic_ball(_default_grid(257)), spec)

    assert bianchi_residual(fine) < 0.5 * bianchi_residual(coarse)


def test_bianchi_residual_fourth_order():
    spec = PerturbationSpec(BUMP, 0.1, center=0.5, width=0.4)
    residuals = [
        bianchi_residual(perturb(hyperbolic_ball(_default_grid(n)), spec))
        for n in (257, 513)
    ]

    assert residuals[0] >= 4 * residuals[1]


def test_ape_residual_finite():
    residual = ape_residual(hyperbolic_ball(_default_grid(129)))

    assert np.isfinite(residual)
    assert residual >= 0


def test_check_positive():
    metric = hyperbolic_ball(_default_grid(33))
    wbar = np.array(metric.wbar)
    wbar[10] = -1.0

    check_positive(metric)
    with raises(DegenerateMetric):
        check_positive(metric.replace(wbar=wbar))
    with raises(DegenerateMetric):
        curvature_of(metric.replace(wbar=wbar))
