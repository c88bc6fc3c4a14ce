"""
Flow diagnostics.

snapshot_record,
trE_residual_series,
bdf_drift_profile,
diag_first_variation,
diag_second_variation,
diag_trE_evolution,
diag_decay_persistence,
diag_bdf_drift,
diag_boundary_persistence

Time derivatives are second order finite differences over the snapshot
times, so their accuracy is set by the snapshot spacing.
"""
from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np
from numpy import ndarray

from renvol.core.bdf import SpecialBdf, graham_lee_normalize, special_bdf
from renvol.core.curvature import (
    ProfileDerivatives,
    curvature_of,
    laplacian,
    log_derivatives,
    s_derivatives,
)
from renvol.core.metric import CohomOneMetric
from renvol.expansion.fefferman_graham import fit_expansion
from renvol.utils.constants import (
    BDF_DRIFT_SLOPE,
    DE_INTEGRAL,
    DETURCK_NORM,
    EINSTEIN_SHIFT,
    MIN_SCALAR_GAP,
    RENV_ANDERSON,
    RENV_HADAMARD,
    RENV_RIESZ,
    SECOND_VARIATION_RHS,
    SUP_APE_DECAY,
    TRE_RESIDUAL,
    V2_FIT,
    Z_INTEGRAL,
)
from renvol.utils.errors import FitUnstable, InsufficientSnapshots, NumericalError
from renvol.utils.log import logger
from renvol.utils.math import EVEN, loglog_slope
from renvol.volume.renormalized import reconcile, renv_hadamard, volume_integral

if TYPE_CHECKING:
    from renvol.flow.ricci_deturck import FlowConfig, FlowTrace

DRIFT_WINDOW = 0.15
NAN = float('nan')


def _require(trace: FlowTrace, count: int, name: str):
    if len(trace) < count:
        raise InsufficientSnapshots(
            f'{name} needs {count} snapshots, the trace has {len(trace)}'
        )


def _guarded(name: str, func, *args, **kwargs):
    """Runs a diagnostic, logging numerical failures and returning None."""
    try:
        return func(*args, **kwargs)
    except NumericalError as e:
        logger.warning(f'{name} failed at this snapshot: {e}')
        return None


def bdf_drift_profile(
    initial: SpecialBdf, current: SpecialBdf
) -> tuple[ndarray, ndarray]:
    """
    Drift omega = log(x_t / x_0) of the special bdf at the nodes.

    Parameters
    ----------
    initial : SpecialBdf
        Bdf at t=0
    current : SpecialBdf
        Bdf at time t on the same grid

    Returns
    -------
    tuple of ndarray
        x_0 and omega
    """
    return initial.x, np.log(current.x_over_s / initial.x_over_s)


def _drift_slope(initial: SpecialBdf, current: SpecialBdf, floor: float) -> float:
    x, omega = bdf_drift_profile(initial, current)
    window = (x >= x[2]) & (x <= DRIFT_WINDOW * initial.x_max)
    sample = omega[window]
    if np.max(np.abs(sample)) <= floor:
        return float('inf')
    if window.sum() < 3:
        raise FitUnstable('too few nodes to fit the bdf drift order')
    if not (np.all(sample > 0) or np.all(sample < 0)):
        raise FitUnstable('bdf drift changes sign near the boundary')
    return loglog_slope(x[window], sample)


def snapshot_record(
    metric: CohomOneMetric,
    reference: CohomOneMetric,
    config: FlowConfig,
    ref_derivs: ProfileDerivatives | None = None,
    initial: CohomOneMetric | None = None,
) -> tuple[dict, object]:
    """
    Diagnostics of one flow snapshot.

    Parameters
    ----------
    metric : CohomOneMetric
        Snapshot metric
    reference : CohomOneMetric
        Reference metric of the gauge
    config : FlowConfig
        Run settings
    ref_derivs : ProfileDerivatives, optional
        Precomputed logarithmic derivatives of the reference,
        by default None
    initial : CohomOneMetric, optional
        Metric at t=0 for the bdf drift, by default None

    Returns
    -------
    tuple
        Row of trace values, time excluded, and the RenVBreakdown or None
    """
    from renvol.flow.ricci_deturck import deturck_rhs

    derivs = log_derivatives(metric)
    fields = curvature_of(metric, derivs)
    bdf = special_bdf(metric)
    inner = slice(1, -1)
    _, ws = deturck_rhs(metric, reference, ref_derivs, fields, derivs)

    record = {
        MIN_SCALAR_GAP: float(np.min(fields.scalar_gap)),
        SUP_APE_DECAY: float(
            np.max(fields.e_norm[inner] / bdf.x[inner] ** config.gamma)
        ),
        DETURCK_NORM: float(np.max(np.sqrt(metric.ubar) * np.abs(ws))),
        TRE_RESIDUAL: NAN,
    }

    breakdown = None
    if config.full_renv:
        breakdown = _guarded('reconcile', reconcile, metric, fields=fields)
    if breakdown is not None:
        record[RENV_HADAMARD] = breakdown.hadamard
        record[RENV_RIESZ] = breakdown.riesz
        record[RENV_ANDERSON] = breakdown.anderson
        record[V2_FIT] = breakdown.ledger.get('v2_fit', NAN)
    else:
        hadamard = _guarded('renv_hadamard', renv_hadamard, metric, bdf=bdf)
        record[RENV_HADAMARD] = NAN if hadamard is None else hadamard[0]
        record[RENV_RIESZ] = record[RENV_ANDERSON] = record[V2_FIT] = NAN

    integrands = {
        DE_INTEGRAL: (1.0, fields.tr_e),
        SECOND_VARIATION_RHS: (
            -1.0,
            2 * fields.e_norm2 - 2 * EINSTEIN_SHIFT * fields.tr_e - fields.tr_e ** 2,
        ),
        Z_INTEGRAL: (-2.0, fields.z2),
    }
    for name, (factor, values) in integrands.items():
        value = _guarded(name, volume_integral, metric, values, bdf)
        record[name] = NAN if value is None else factor * value

    record[BDF_DRIFT_SLOPE] = NAN
    if initial is not None:
        slope = _guarded(
            'bdf drift', _drift_slope, special_bdf(initial), bdf, metric.grid.h ** 4
        )
        record[BDF_DRIFT_SLOPE] = NAN if slope is None else slope
    return record, breakdown


def _tre_rhs(
    metric: CohomOneMetric, reference: CohomOneMetric, ref_derivs: ProfileDerivatives
) -> tuple[ndarray, ndarray]:
    """trE and Delta trE + W(trE) + 2 |E|^2 - 6 trE at the nodes."""
    from renvol.flow.ricci_deturck import deturck_rhs

    derivs = log_derivatives(metric)
    fields = curvature_of(metric, derivs)
    _, ws = deturck_rhs(metric, reference, ref_derivs, fields, derivs)
    tr_e = fields.tr_e
    tr_e_s, _ = s_derivatives(metric.grid, tr_e, EVEN)
    rhs = (
        laplacian(metric, tr_e, derivs)
        + metric.s * ws * tr_e_s
        + 2 * fields.e_norm2
        - 2 * EINSTEIN_SHIFT * tr_e
    )
    return tr_e, rhs


def trE_residual_series(trace: FlowTrace) -> ndarray:
    """
    Sup over interior nodes of the trE evolution residual per snapshot.

    Parameters
    ----------
    trace : FlowTrace
        A trace with at least 3 snapshots

    Returns
    -------
    ndarray
        One residual per snapshot

    Raises
    ------
    InsufficientSnapshots
        With fewer than 3 snapshots
    """
    _require(trace, 3, 'the trE evolution residual')
    ref_derivs = log_derivatives(trace.reference)
    pairs = [_tre_rhs(m, trace.reference, ref_derivs) for m in trace.metrics]
    tr_e = np.array([p[0] for p in pairs])
    rhs = np.array([p[1] for p in pairs])
    rate = np.gradient(tr_e, np.asarray(trace.times), axis=0, edge_order=2)
    return np.max(np.abs(rate - rhs)[:, 2:-2], axis=1)


def diag_trE_evolution(trace: FlowTrace) -> float:
    """
    Residual of (d/dt - Delta) trE = 2 |E|^2 - 6 trE along the run.

    The gauge adds W(trE) to the time derivative of every scalar, so the
    right side is evaluated with that term included.

    Parameters
    ----------
    trace : FlowTrace
        A trace with at least 3 snapshots

    Returns
    -------
    float
        Largest sup norm residual over the snapshots

    Raises
    ------
    InsufficientSnapshots
        With fewer than 3 snapshots
    """
    return float(np.max(trE_residual_series(trace)))


def diag_first_variation(trace: FlowTrace) -> float:
    """
    Residual of d RenV / dt = -int (Sc + 12) dV.

    Parameters
    ----------
    trace : FlowTrace
        A trace with at least 3 snapshots

    Returns
    -------
    float
        max over snapshots of |d RenV / dt + int trE dV|

    Raises
    ------
    InsufficientSnapshots
        With fewer than 3 snapshots
    """
    _require(trace, 3, 'the first variation')
    times = np.asarray(trace.times)
    rate = np.gradient(trace.column(RENV_HADAMARD), times, edge_order=2)
    residual = np.abs(rate + trace.column(DE_INTEGRAL))
    logger.debug(f'...first variation residuals {residual}')
    return float(np.nanmax(residual))


def diag_second_variation(trace: FlowTrace) -> float:
    """
    Residual of d^2 RenV / dt^2 = -int (2 |E|^2 - 6 trE - trE^2) dV.

    Where trE vanishes the right side reduces to -2 int |Z|^2 dV, which
    the trace keeps in its z_integral column.

    Parameters
    ----------
    trace : FlowTrace
        A trace with at least 5 snapshots

    Returns
    -------
    float
        max over the inner snapshots of the residual

    Raises
    ------
    InsufficientSnapshots
        With fewer than 5 snapshots
    """
    _require(trace, 5, 'the second variation')
    times = np.asarray(trace.times)
    renv = trace.column(RENV_HADAMARD)
    second = np.gradient(np.gradient(renv, times, edge_order=2), times, edge_order=2)
    residual = np.abs(second - trace.column(SECOND_VARIATION_RHS))[2:-2]
    return float(np.nanmax(residual))


def diag_decay_persistence(
    trace: FlowTrace, gamma: float | None = None
) -> tuple[ndarray, float]:
    """
    Series of sup x^-gamma |E| over the snapshots.

    Parameters
    ----------
    trace : FlowTrace
        A trace
    gamma : float, optional
        Decay exponent, by default the one of the run

    Returns
    -------
    tuple
        The series and its max / min ratio

    Raises
    ------
    NonAHMetric
        If a snapshot has no special bdf
    """
    _require(trace, 1, 'decay persistence')
    if gamma is None or gamma == trace.config.gamma:
        series = trace.column(SUP_APE_DECAY)
    else:
        inner = slice(1, -1)
        series = np.array([
            np.max(curvature_of(m).e_norm[inner] / special_bdf(m).x[inner] ** gamma)
            for m in trace.metrics
        ])
    low = float(np.min(series))
    ratio = float(np.max(series)) / low if low > 0 else float('inf')
    return series, ratio


def diag_bdf_drift(trace: FlowTrace, floor: float | None = None) -> float:
    """
    Leading order in x of omega_t = log(x_t / x_0) at the last snapshot.

    Parameters
    ----------
    trace : FlowTrace
        A trace with at least 2 snapshots
    floor : float, optional
        Drift below which omega counts as zero, by default h^4

    Returns
    -------
    float
        Log-log slope of |omega| against x near the boundary, inf when
        the drift is below the floor

    Raises
    ------
    InsufficientSnapshots
        With fewer than 2 snapshots
    FitUnstable
        If omega changes sign or the window holds too few nodes
    """
    _require(trace, 2, 'the bdf drift')
    initial, last = trace.metrics[0], trace.metrics[-1]
    if floor is None:
        floor = initial.grid.h ** 4
    return _drift_slope(special_bdf(initial), special_bdf(last), floor)


def diag_boundary_persistence(trace: FlowTrace) -> float:
    """
    Largest change of the fitted v2 along the run.

    v2 depends only on the conformal infinity, which the flow keeps fixed.

    Parameters
    ----------
    trace : FlowTrace
        A trace with at least 2 snapshots

    Returns
    -------
    float
        max over snapshots of |v2(t) - v2(0)|
    """
    _require(trace, 2, 'boundary persistence')
    series = trace.column(V2_FIT)
    if not np.all(np.isfinite(series)):
        series = np.array([
            fit_expansion(graham_lee_normalize(m)).v[2] for m in trace.metrics
        ])
    return float(np.max(np.abs(series - series[0])))
