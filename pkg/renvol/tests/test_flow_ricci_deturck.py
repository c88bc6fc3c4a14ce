import os

import numpy as np
from numpy.testing import assert_allclose, assert_equal
from pytest import raises

from renvol.core.bdf import graham_lee_normalize
from renvol.core.grid import make_grid
from renvol.core.models import ads_schwarzschild, hyperbolic_ball
from renvol.flow.perturbation import PerturbationSpec, perturb
from renvol.flow.ricci_deturck import (
    FlowConfig,
    cfl_factor,
    deturck_rhs,
    read_trace_pkl,
    run,
    save_trace_pkl,
    step,
)
from renvol.utils.constants import RENV_HADAMARD, TANH, TIME, TRACE_COLUMNS, UBAR
from renvol.utils.errors import CFLViolation
from renvol.utils.math import axis_limit
from renvol.utils.tables import read_csv

STATIONARY = FlowConfig(t_end=2e-3, snapshot_stride=4, full_renv=False)


def _ball():
    return hyperbolic_ball(make_grid(49))


def test_flow_config():
    config = FlowConfig()

    assert config.dt is None
    assert_equal(config.to_dict()['c_cfl'], 0.1)
    for kwargs in (
        {'dt': -1.0},
        {'t_end': 0.0},
        {'gamma': 5.0},
        {'c_cfl': 0.5},
        {'snapshot_stride': 0},
        {'reference': 'ball'},
        {'blowup_threshold': 0.0},
    ):
        with raises(ValueError):
            FlowConfig(**kwargs)


def test_cfl_factor():
    metric = _ball()

    factor = cfl_factor(metric)

    assert factor > 1.0
    assert cfl_factor(ads_schwarzschild(1.0, make_grid(49))) > 0


def test_deturck_rhs_at_reference():
    metric = _ball()

    rates, ws = deturck_rhs(metric, metric)

    assert_allclose(ws, 0.0, atol=1e-12)
    assert_equal(sorted(rates), sorted([UBAR, 'W']))
    for rate in rates.values():
        assert_equal(rate[0], 0.0)


def test_deturck_rhs_needs_axis_chart():
    metric = _ball()

    with raises(ValueError):
        deturck_rhs(graham_lee_normalize(metric), metric)


def test_step_cfl_violation():
    metric = _ball()

    with raises(CFLViolation):
        step(metric, 1.0, metric)


def test_run_stationary_on_einstein_data():
    initial = _ball()

    trace = run(initial, STATIONARY)

    assert trace.error is None
    assert_equal(len(trace), 4)
    assert_allclose(trace.times[-1], STATIONARY.t_end)
    final = trace.metrics[-1]
    assert_equal(final.ubar[0], initial.ubar[0])
    drift = np.max(np.abs(final.wbar - initial.wbar)) / np.max(initial.wbar)
    assert drift < 1e-2
    assert np.all(np.isfinite(trace.column(TIME)))
    assert_equal(list(trace.to_dataframe().columns[:len(TRACE_COLUMNS)]), TRACE_COLUMNS)


def test_run_attaches_partial_trace():
    with raises(CFLViolation) as info:
        run(_ball(), FlowConfig(dt=1.0, t_end=1.0))

    trace = info.value.trace
    assert_equal(len(trace), 1)
    assert trace.error.startswith('CFLViolation')


def test_trace_files(tmpdir):
    trace = run(_ball(), STATIONARY)
    d = tmpdir.mkdir('flow')

    file_pkl = os.path.join(d, 'trace.pkl')
    save_trace_pkl(trace, file_pkl)
    loaded = read_trace_pkl(file_pkl)
    assert_equal(loaded.times, trace.times)
    assert_equal(loaded.last_operation['name'], 'read_trace_pkl')

    file_csv = os.path.join(d, 'trace.csv')
    trace.to_csv(file_csv)
    table = read_csv(file_csv)
    assert_equal(len(table), len(trace))
    assert_allclose(table[TIME].to_numpy(), trace.times)


def test_run_last_step_stops_at_t_end():
    initial = _ball()
    dt = 0.15 * initial.grid.h ** 2 * cfl_factor(initial)
    config = FlowConfig(dt=dt, t_end=5.5 * dt, snapshot_stride=2, full_renv=False)

    trace = run(initial, config)

    assert_equal(len(trace), 4)
    assert_allclose(trace.times, [0.0, 2 * dt, 4 * dt, 5.5 * dt])
    assert trace.times[-1] <= config.t_end


def test_run_stationary_on_ads_schwarzschild():
    initial = ads_schwarzschild(1.0, make_grid(129, TANH))
    config = FlowConfig(t_end=5e-3, snapshot_stride=20, full_renv=False)

    trace = run(initial, config)

    assert trace.error is None
    final = trace.metrics[-1]
    for before, after in (
        (initial.ubar, final.ubar),
        (initial.vbar, final.vbar),
        (initial.wbar, final.wbar),
    ):
        assert np.max(np.abs(after - before)) <= 1e-5 * np.max(np.abs(before))
    renv = trace.column(RENV_HADAMARD)
    assert np.max(np.abs(renv - renv[0])) <= 1e-5


def _cone_gap(metric):
    # Ubar(1) against the axis limit of V (2 - s)^2 / (1 - s)^2
    s = metric.s[-6:]
    with np.errstate(divide='ignore', invalid='ignore'):
        smooth = metric.vbar[-6:] * (2 - s) ** 2 / (1 - s) ** 2
    return metric.ubar[-1] - axis_limit(smooth) / metric.ansatz.cone_slope ** 2


def test_cone_condition_is_kept():
    initial = ads_schwarzschild(0.7, make_grid(65, TANH))
    metric = perturb(initial, PerturbationSpec('bump', 0.1, center=0.5, width=0.3))
    dt = 0.1 * metric.grid.h ** 2 * cfl_factor(metric)

    rates, _ = deturck_rhs(metric, initial)
    result = step(metric, dt, initial)

    assert np.isfinite(rates[UBAR][-1])
    assert_allclose(_cone_gap(result), _cone_gap(metric), atol=1e-10)
    assert_equal(result.vbar[-1], 0.0)
