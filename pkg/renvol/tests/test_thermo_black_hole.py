from math import pi, sqrt

import numpy as np
import sympy
from numpy.testing import assert_allclose, assert_almost_equal, assert_equal
from pytest import raises

from renvol.core.models import ads_beta
from renvol.thermo.black_hole import (
    bh_state,
    free_energy_check,
    hawking_page_transition,
    horizon_radii,
    phase_table,
    renv_closed_form,
)
from renvol.utils.constants import (
    BETA,
    LARGE,
    MINIMIZER,
    ORDERED,
    PHASE_COLUMNS,
    SMALL,
    THERMAL,
    TRANSITION,
)
from renvol.utils.errors import DegenerateRoot, NoBlackHole


def test_horizon_radii():
    a_small, a_large = horizon_radii(pi)

    assert_almost_equal(a_small, 1 / 3)
    assert_almost_equal(a_large, 1.0)


def test_horizon_radii_small_beta():
    a_small, a_large = horizon_radii(1e-6)

    assert_allclose(a_small * a_large, 1 / 3, rtol=1e-12)
    assert_allclose(ads_beta(a_small), 1e-6, rtol=1e-9)


def test_horizon_radii_errors():
    with raises(DegenerateRoot) as info:
        horizon_radii(2 * pi / sqrt(3))
    assert_almost_equal(info.value.a, 1 / sqrt(3))

    with raises(NoBlackHole):
        horizon_radii(4.0)
    with raises(ValueError):
        horizon_radii(0.0)


def test_renv_closed_form():
    assert_almost_equal(renv_closed_form(1 / 3), 16 * pi ** 2 / 81)
    assert_almost_equal(renv_closed_form(1.0), 0.0)
    assert_almost_equal(renv_closed_form(2.0), -32 * pi ** 2 / 13)
    with raises(ValueError):
        renv_closed_form(-1.0)


def test_free_energy_check():
    for a in np.geomspace(0.05, 20, 40):
        assert free_energy_check(a) <= 1e-12


def test_free_energy_identity_symbolic():
    a = sympy.symbols('a', positive=True)
    beta = 4 * sympy.pi * a / (1 + 3 * a ** 2)
    renv = sympy.Rational(8, 3) * sympy.pi ** 2 * a ** 2 * (1 - a ** 2) / (1 + 3 * a ** 2)
    mass = (a + a ** 3) / 2
    entropy = sympy.pi * a ** 2

    scaled = sympy.simplify(3 / (8 * sympy.pi * beta) * renv)

    assert sympy.simplify(scaled - (mass - entropy / beta)) == 0
    assert sympy.simplify(scaled - (a - a ** 3) / 4) == 0


def test_bh_state():
    state = bh_state(pi, SMALL)

    assert_almost_equal(state.a, 1 / 3)
    assert_almost_equal(state.entropy, pi / 9)
    assert_allclose(state.free_energy, state.free_energy_scaled, atol=1e-14)
    assert_equal(state.to_dict()['branch'], SMALL)
    with raises(ValueError):
        bh_state(pi, 'medium')


def test_phase_table():
    table = phase_table(1.0, 3.5, 26)

    assert_equal(list(table.columns), PHASE_COLUMNS + [ORDERED, TRANSITION])
    assert_equal(len(table), 26)
    below = table[table[BETA] < pi]
    assert below[ORDERED].all()
    assert (below[MINIMIZER] == LARGE).all()
    assert (table[table[BETA] > pi][MINIMIZER] == THERMAL).all()
    assert_equal(table[TRANSITION].sum(), 2)


def test_phase_table_errors():
    with raises(ValueError):
        phase_table(2.0, 1.0, 5)
    with raises(ValueError):
        phase_table(1.0, 2.0, 0)
    with raises(NoBlackHole):
        phase_table(1.0, 4.0, 5)


def test_hawking_page_transition():
    assert_almost_equal(hawking_page_transition(), pi, decimal=10)
