import numpy as np
from numpy.testing import assert_allclose, assert_equal
from pytest import raises

from renvol.core.grid import make_grid
from renvol.core.models import ads_schwarzschild, hyperbolic_ball
from renvol.flow.perturbation import (
    PerturbationSpec,
    bump_profile,
    perturb,
    sample_perturbation,
)
from renvol.utils.errors import NonAPEPerturbation, RejectionExhausted


def _ball():
    return hyperbolic_ball(make_grid(65))


def test_perturbation_spec_validation():
    for args, kwargs in (
        (('ripple', 0.1), {}),
        (('bump', 0.1), {'center': 0.5, 'width': 0.0}),
        (('bump', 0.1), {'center': 0.1, 'width': 0.2}),
        (('tail', 0.1), {'width': 1.5}),
        (('tail', 0.1), {'width': 0.5, 'order': 0}),
        (('conformal', 0.1), {'center': -1.0}),
        (('conformal', 0.1), {'components': ('Q',)}),
    ):
        with raises(ValueError):
            PerturbationSpec(*args, **kwargs)

    spec = PerturbationSpec('bump', 0.2, center=0.5, width=0.1, components=('V', 'W'))
    assert_equal(spec.to_dict()['components'], ['V', 'W'])


def test_bump_profile():
    s = np.linspace(0, 1, 101)

    bump = bump_profile(s, 0.5, 0.2)

    assert_equal(bump.max(), 1.0)
    assert_equal(bump[50], 1.0)
    assert_equal(bump[s <= 0.3], 0.0)
    assert_equal(bump[s >= 0.7], 0.0)
    assert np.all(bump >= 0)


def test_perturb_zero_amplitude():
    metric = _ball()

    assert perturb(metric, PerturbationSpec('conformal', 0.0)) is metric


def test_perturb_conformal_keeps_boundary():
    metric = _ball()

    result = perturb(metric, PerturbationSpec('conformal', 0.3, center=0.5))

    assert_equal(result.ubar[0], metric.ubar[0])
    assert_equal(result.wbar[0], metric.wbar[0])
    assert np.max(np.abs(result.wbar - metric.wbar)) > 1e-3
    # Wbar vanishes on the axis
    assert_allclose(
        result.wbar[1:-1] / metric.wbar[1:-1], result.ubar[1:-1] / metric.ubar[1:-1]
    )


def test_perturb_bump():
    metric = ads_schwarzschild(1.0, make_grid(65))
    spec = PerturbationSpec('bump', 0.2, center=0.5, width=0.1, components=('V',))

    result = perturb(metric, spec)

    assert_allclose(result.ubar, metric.ubar)
    assert_allclose(result.wbar, metric.wbar)
    outside = np.abs(metric.s - 0.5) >= 0.1
    assert_allclose(result.vbar[outside], metric.vbar[outside])
    assert np.all(result.vbar[~outside] >= metric.vbar[~outside])


def test_perturb_tail():
    metric = _ball()
    spec = PerturbationSpec('tail', 0.1, width=0.5, order=2)

    with raises(NonAPEPerturbation):
        perturb(metric, spec)

    result = perturb(metric, spec, require_ape=False)
    assert_allclose(result.wbar[metric.s >= 0.5], metric.wbar[metric.s >= 0.5])


def test_perturb_missing_component():
    spec = PerturbationSpec('bump', 0.2, center=0.5, width=0.1, components=('V',))

    with raises(ValueError):
        perturb(_ball(), spec)


def test_sample_perturbation_is_seeded():
    metric = _ball()

    first, spec = sample_perturbation(metric, seed=3, gap_tol=0.05)
    second, again = sample_perturbation(metric, seed=3, gap_tol=0.05)

    assert_equal(spec, again)
    assert_equal(first.wbar, second.wbar)
    assert 0.05 <= spec.amplitude <= 0.5


def test_sample_perturbation_bump():
    _, spec = sample_perturbation(_ball(), kind='bump', seed=1, gap_tol=1e3)

    assert 0 < spec.center - spec.width < spec.center + spec.width < 1


def test_sample_perturbation_exhausted():
    with raises(RejectionExhausted):
        sample_perturbation(_ball(), budget=0)
