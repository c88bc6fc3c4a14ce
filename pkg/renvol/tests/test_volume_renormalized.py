from math import pi

import numpy as np
from numpy.testing import assert_allclose, assert_almost_equal, assert_equal
from pytest import raises

from renvol.core.bdf import special_bdf
from renvol.core.grid import make_grid
from renvol.core.models import ads_schwarzschild, hyperbolic_ball, thermal_hyperbolic
from renvol.flow.perturbation import PerturbationSpec, perturb
from renvol.thermo.black_hole import renv_closed_form
from renvol.utils.constants import GAUSS_BONNET, TANH, UNIT_S3_VOLUME
from renvol.utils.errors import DivergentIntegral, FitUnstable
from renvol.volume.renormalized import (
    RenVBreakdown,
    area_density,
    reconcile,
    renv_anderson,
    renv_hadamard,
    renv_riesz,
    volume_integral,
)


def _ball():
    return hyperbolic_ball(make_grid(513))


def test_area_density_ball():
    metric = _ball()
    bdf = special_bdf(metric)

    expected = UNIT_S3_VOLUME * (1 - bdf.x ** 2 / 4) ** 3

    assert_allclose(area_density(metric, bdf), expected, atol=1e-6)


def test_volume_integral_ball():
    metric = _ball()
    bdf = special_bdf(metric)

    value = volume_integral(metric, bdf.x ** 4, bdf)

    assert_allclose(value, 64 * pi ** 2 / 35, rtol=1e-4)


def test_volume_integral_divergent():
    metric = _ball()

    with raises(DivergentIntegral):
        volume_integral(metric, np.ones_like(metric.s))


def test_renv_hadamard_ball():
    value, ledger = renv_hadamard(_ball())

    assert_allclose(value, 4 * pi ** 2 / 3, rtol=1e-4)
    assert_almost_equal(ledger['v2'], -0.75)
    assert_allclose(ledger['c3'], UNIT_S3_VOLUME / 3, rtol=1e-6)
    assert_equal(len(ledger['eps']), 9)


def test_renv_hadamard_unstable():
    with raises(FitUnstable):
        renv_hadamard(_ball(), fit_tol=0.0)


def test_renv_anderson_ball():
    value, terms = renv_anderson(_ball())

    assert_almost_equal(terms['chi_term'], GAUSS_BONNET)
    assert abs(terms['curvature_term']) < 1e-3
    assert_allclose(value, 4 * pi ** 2 / 3, rtol=1e-3)


def test_reconcile_ball():
    breakdown = reconcile(_ball())

    for value in breakdown.values.values():
        assert_allclose(value, 4 * pi ** 2 / 3, rtol=1e-3)
    assert breakdown.spread < 1e-2


def test_reconcile_thermal_hyperbolic():
    breakdown = reconcile(thermal_hyperbolic(pi, make_grid(513, TANH)))

    for value in breakdown.values.values():
        assert abs(value) < 1e-2


def test_reconcile_ads_schwarzschild():
    expected = renv_closed_form(2.0)

    breakdown = reconcile(ads_schwarzschild(2.0, make_grid(513, TANH)))

    assert_allclose(breakdown.hadamard, expected, rtol=1e-3)
    assert_allclose(breakdown.riesz, expected, rtol=1e-3)
    assert_allclose(breakdown.anderson, expected, rtol=1e-3)


def test_breakdown():
    breakdown = RenVBreakdown(1.0, 1.5, 0.8)

    assert_almost_equal(breakdown.spread, 0.7)
    assert_equal(
        sorted(breakdown.to_dict()),
        [
            'agreementSpread', 'anderson', 'anderson_terms', 'hadamard',
            'hadamard_ledger', 'riesz', 'riesz_spread',
        ],
    )


def test_renv_riesz_ball():
    value, spread = renv_riesz(_ball())

    assert_allclose(value, 4 * pi ** 2 / 3, rtol=1e-3)
    assert 0 <= spread < 1e-2


def _fine_grid():
    return make_grid(2048, TANH)


def test_renv_routes_ads_schwarzschild_fine_grid():
    for a in (1 / 3, 0.7, 1.0, 2.0):
        expected = renv_closed_form(a)
        # relative to |RenV|, absolute where RenV vanishes
        tol = 1e-4 * max(abs(expected), 1.0)

        breakdown = reconcile(ads_schwarzschild(a, _fine_grid()))

        for value in breakdown.values.values():
            assert abs(value - expected) <= tol


def test_renv_routes_thermal_hyperbolic_fine_grid():
    breakdown = reconcile(thermal_hyperbolic(pi / 2, _fine_grid()))

    for value in breakdown.values.values():
        assert abs(value) <= 1e-4


def test_renv_hadamard_ball_fine_grid():
    value, _ = renv_hadamard(hyperbolic_ball(_fine_grid()))

    assert_allclose(value, 4 * pi ** 2 / 3, rtol=1e-5)


def test_renv_riesz_matches_hadamard_on_perturbed_metrics():
    spec = PerturbationSpec('conformal', 0.05, center=0.5)
    for metric in (
        thermal_hyperbolic(pi / 2, _fine_grid()),
        hyperbolic_ball(_fine_grid()),
    ):
        perturbed = perturb(metric, spec)

        hadamard, _ = renv_hadamard(perturbed)
        riesz, _ = renv_riesz(perturbed)

        assert abs(riesz - hadamard) <= 1e-4 * (1 + abs(hadamard))


def test_renv_hadamard_large_perturbation():
    metric = perturb(
        thermal_hyperbolic(pi / 2, make_grid(257, TANH)),
        PerturbationSpec('conformal', 0.3, center=0.5),
    )

    value, ledger = renv_hadamard(metric)

    assert np.isfinite(value)
    assert ledger['subset_spread'] <= 1e-4 * (1 + abs(value))


def test_volume_integral_einstein_noise_is_not_divergent():
    metric = ads_schwarzschild(1.0, make_grid(65, TANH))
    bdf = special_bdf(metric)
    # a one-signed plateau far below the discretization tolerance
    plateau = np.full(metric.s.size, 1e-5)

    value = volume_integral(metric, plateau, bdf)

    assert np.isfinite(value)
