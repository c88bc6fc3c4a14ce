"""
Normalized Ricci-DeTurck flow.

FlowConfig,
FlowTrace,
cfl_factor,
deturck_rhs,
step,
run,
save_trace_pkl,
read_trace_pkl

The flow dg/dt = -2 E(g) + L_W g, with W the DeTurck vector of g against
a fixed reference metric, keeps the diagonal ansatz. In terms of
Ws = W^s / s the profile rates are

    dF_i/dt = F_i (-2 E_i + Ws lam1_i)
    dUbar/dt = Ubar (-2 E_r + Ws (lam1_U - 2) + 2 d(s Ws)/ds)

Boundary values at s=0 stay at their initial values, the collapsing
profile stays zero at s=1 and the rate of Ubar(1) is the one that keeps
the cone condition Ubar(1) = H(1) / kappa^2, where H = F (2 - s)^2 / (1 - s)^2
for the collapsing profile F.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from pathlib import Path

import joblib
import numpy as np
from numpy import ndarray
from pandas import DataFrame

from renvol.core.curvature import (
    CurvatureFields,
    ProfileDerivatives,
    ape_residual,
    check_positive,
    curvature_of,
    log_derivatives,
)
from renvol.core.metric import CohomOneMetric
from renvol.utils.constants import (
    AXIS_CHART,
    TIME,
    TRACE_COLUMNS,
    TRACE_EXTRA_COLUMNS,
    TRACE_UNITS,
    TRE_RESIDUAL,
    UBAR,
)
from renvol.utils.errors import (
    BlowupDetected,
    CFLViolation,
    DegenerateMetric,
    NonAHMetric,
    NumericalError,
    PositivityLost,
)
from renvol.utils.log import logger, progress_bar, timer_decorator
from renvol.utils.math import ODD, axis_limit, derivatives
from renvol.utils.mem import begin_operation, end_operation
from renvol.utils.tables import write_csv

INITIAL = 'initial'
REFERENCES = [INITIAL]
C_CFL = 0.1
CFL_LIMIT = 0.25
BLOWUP_THRESHOLD = 1e6


@dataclass(frozen=True)
class FlowConfig:
    """
    Settings of a flow run.

    dt=None selects dt = c_cfl h^2 min(Ubar (ds/dsigma)^2 / s^2); a fixed
    dt above cfl_limit h^2 times the same factor is rejected.
    """

    dt: float | None = None
    c_cfl: float = C_CFL
    cfl_limit: float = CFL_LIMIT
    t_end: float = 0.05
    snapshot_stride: int = 50
    gamma: float = 4.0
    blowup_threshold: float = BLOWUP_THRESHOLD
    reference: str = INITIAL
    full_renv: bool = True
    require_ape: bool = True

    def __post_init__(self):
        """Validates the settings."""
        if self.dt is not None and not self.dt > 0:
            raise ValueError(f'dt must be positive, got {self.dt}')
        if not self.t_end > 0:
            raise ValueError(f't_end must be positive, got {self.t_end}')
        if not 0 < self.gamma <= 4:
            raise ValueError(f'gamma must lie in (0, 4], got {self.gamma}')
        if not 0 < self.c_cfl <= self.cfl_limit:
            raise ValueError(
                f'c_cfl must lie in (0, {self.cfl_limit}], got {self.c_cfl}'
            )
        if self.snapshot_stride < 1:
            raise ValueError(
                f'snapshot stride must be positive, got {self.snapshot_stride}'
            )
        if not self.blowup_threshold > 0:
            raise ValueError('blowup threshold must be positive')
        if self.reference not in REFERENCES:
            raise ValueError(
                f'reference must be one of {REFERENCES}, got {self.reference}'
            )

    def to_dict(self) -> dict:
        """Returns the settings in a dict format."""
        return dataclasses.asdict(self)


@dataclass
class FlowTrace:
    """
    Time series of a flow run.

    records holds one row of diagnostics per snapshot, metrics and
    breakdowns the snapshot metrics and their RenVBreakdown (None when
    not computed). error is set when the run stopped early.
    """

    config: FlowConfig
    dt: float
    reference: CohomOneMetric
    times: list = field(default_factory=list)
    metrics: list = field(default_factory=list)
    breakdowns: list = field(default_factory=list)
    records: list = field(default_factory=list)
    error: str | None = None
    last_operation: dict | None = None

    def __len__(self) -> int:
        """Number of snapshots."""
        return len(self.times)

    def column(self, name: str) -> ndarray:
        """One diagnostic as an array over the snapshots."""
        return np.array([record[name] for record in self.records], dtype=float)

    def to_dataframe(self) -> DataFrame:
        """
        Diagnostics as a table.

        Returns
        -------
        DataFrame
            One row per snapshot, trace columns first
        """
        return DataFrame(self.records, columns=TRACE_COLUMNS + TRACE_EXTRA_COLUMNS)

    def to_csv(self, filename: str | Path):
        """
        Writes the diagnostics with a units row.

        Parameters
        ----------
        filename : str or Path
            Destination file
        """
        write_csv(self.to_dataframe(), filename, TRACE_UNITS)


def save_trace_pkl(trace: FlowTrace, filename: str | Path):
    """
    Save a trace with new file .pkl.

    Parameters
    ----------
    trace : FlowTrace
        The trace
    filename : str or Path
        Represents the name of a file.
    """
    operation = begin_operation('save_trace_pkl')
    with open(filename, 'wb') as f:
        joblib.dump(trace, f)
    trace.last_operation = end_operation(operation)


def read_trace_pkl(filename: str | Path) -> FlowTrace:
    """
    Read a trace from a file .pkl.

    Parameters
    ----------
    filename : str or Path
        Represents the name of a file.

    Returns
    -------
    FlowTrace
        The trace
    """
    operation = begin_operation('read_trace_pkl')
    with open(filename, 'rb') as f:
        trace = joblib.load(f)
    trace.last_operation = end_operation(operation)
    return trace


def cfl_factor(metric: CohomOneMetric) -> float:
    """
    Inverse of the largest radial diffusivity in the computational coordinate.

    Parameters
    ----------
    metric : CohomOneMetric
        The metric

    Returns
    -------
    float
        min over interior nodes of Ubar (ds/dsigma)^2 / s^2
    """
    grid = metric.grid
    inner = slice(1, -1)
    factor = metric.ubar[inner] * grid.ds[inner] ** 2 / grid.points[inner] ** 2
    return float(np.min(factor))


def _cone_value(metric: CohomOneMetric, values: ndarray) -> float:
    """Ubar(1) = H(1) / kappa^2, H the collapsing F (2 - s)^2 over (1 - s)^2."""
    s = metric.grid.points[-6:]
    with np.errstate(divide='ignore', invalid='ignore'):
        smooth = values[-6:] * (2.0 - s) ** 2 / (1.0 - s) ** 2
    return axis_limit(smooth) / metric.ansatz.cone_slope ** 2


def _state(metric: CohomOneMetric) -> dict:
    state = {k: np.array(v) for k, v in metric.profiles().items()}
    return {UBAR: np.array(metric.ubar), **state}


def _metric(metric: CohomOneMetric, state: dict) -> CohomOneMetric:
    profiles = {k: v for k, v in state.items() if k != UBAR}
    return metric.with_profiles(state[UBAR], profiles)


def _impose(metric: CohomOneMetric, boundary: dict, state: dict) -> dict:
    """Boundary pinning and collapse condition."""
    for name, value in boundary.items():
        state[name][0] = value
    state[metric.ansatz.collapsing][-1] = 0.0
    return state


def deturck_rhs(
    metric: CohomOneMetric,
    reference: CohomOneMetric,
    ref_derivs: ProfileDerivatives | None = None,
    fields: CurvatureFields | None = None,
    derivs: ProfileDerivatives | None = None,
) -> tuple[dict, ndarray]:
    """
    Rates of the compactified profiles under the Ricci-DeTurck flow.

    Parameters
    ----------
    metric : CohomOneMetric
        Current metric, axis chart
    reference : CohomOneMetric
        Reference metric of the gauge, same grid and ansatz
    ref_derivs : ProfileDerivatives, optional
        Precomputed logarithmic derivatives of the reference,
        by default None
    fields : CurvatureFields, optional
        Precomputed curvature of metric, by default None
    derivs : ProfileDerivatives, optional
        Precomputed logarithmic derivatives of metric, by default None

    Returns
    -------
    tuple
        Rates keyed by 'Ubar' and fiber name, and Ws = W^s / s

    Raises
    ------
    DegenerateMetric
        If a coefficient is not positive inside
    """
    if metric.chart != AXIS_CHART or reference.grid != metric.grid:
        raise ValueError('flow needs axis chart metrics on the reference grid')
    if ref_derivs is None:
        ref_derivs = log_derivatives(reference)
    if derivs is None:
        derivs = log_derivatives(metric)
    if fields is None:
        fields = curvature_of(metric, derivs)
    grid = metric.grid
    u, u_ref = metric.ubar, reference.ubar
    fibers = metric.ansatz.fibers
    ref_profiles = reference.profiles()
    profiles = metric.profiles()

    with np.errstate(divide='ignore', invalid='ignore'):
        ws = (
            derivs.lam1_u - ref_derivs.lam1_u
            - sum(f.dim * derivs.lam1[f.name] for f in fibers)
        ) / (2 * u)
        for f in fibers:
            ws = ws + f.dim * ref_derivs.lam1[f.name] * ref_profiles[f.name] / (
                2 * u_ref * profiles[f.name]
            )
    ws[-1] = 0.0

    w = grid.points * ws
    w_sigma, _ = derivatives(w, grid.h, ODD)
    w_s = w_sigma / grid.ds

    rates = {UBAR: u * (-2 * fields.e_r + ws * (derivs.lam1_u - 2) + 2 * w_s)}
    with np.errstate(invalid='ignore'):
        for f in fibers:
            rates[f.name] = profiles[f.name] * (
                -2 * fields.e[f.name] + ws * derivs.lam1[f.name]
            )
    for rate in rates.values():
        rate[0] = 0.0
    rates[metric.ansatz.collapsing][-1] = 0.0
    # the cone condition is linear in the collapsing profile
    rates[UBAR][-1] = _cone_value(metric, rates[metric.ansatz.collapsing])
    return rates, ws


def _advance(state: dict, rates: dict, dt: float) -> dict:
    return {k: state[k] + dt * rates[k] for k in state}


def _checked_rhs(
    metric: CohomOneMetric,
    reference: CohomOneMetric,
    ref_derivs: ProfileDerivatives,
    blowup_threshold: float,
) -> dict:
    try:
        derivs = log_derivatives(metric)
        fields = curvature_of(metric, derivs)
    except DegenerateMetric as e:
        raise PositivityLost(str(e)) from e
    sup_rm = float(np.sqrt(np.nanmax(fields.rm2)))
    if not sup_rm <= blowup_threshold:
        raise BlowupDetected(f'sup |Rm| reached {sup_rm:.3e}')
    rates, _ = deturck_rhs(metric, reference, ref_derivs, fields, derivs)
    if not all(np.all(np.isfinite(r)) for r in rates.values()):
        raise PositivityLost('flow rates are not finite')
    return rates


def step(
    metric: CohomOneMetric,
    dt: float,
    reference: CohomOneMetric,
    ref_derivs: ProfileDerivatives | None = None,
    cfl_limit: float = CFL_LIMIT,
    blowup_threshold: float = BLOWUP_THRESHOLD,
) -> CohomOneMetric:
    """
    One classical Runge-Kutta step of the Ricci-DeTurck flow.

    Parameters
    ----------
    metric : CohomOneMetric
        Current metric, axis chart
    dt : float
        Time step
    reference : CohomOneMetric
        Reference metric of the gauge
    ref_derivs : ProfileDerivatives, optional
        Precomputed logarithmic derivatives of the reference,
        by default None
    cfl_limit : float, optional
        Largest allowed dt / (h^2 cfl_factor), by default 0.25
    blowup_threshold : float, optional
        Largest allowed sup |Rm|, by default 1e6

    Returns
    -------
    CohomOneMetric
        The metric at time t + dt

    Raises
    ------
    CFLViolation
        If dt is above the explicit stability bound
    BlowupDetected
        If sup |Rm| exceeds the threshold
    PositivityLost
        If a coefficient stops being positive
    """
    bound = cfl_limit * metric.grid.h ** 2 * cfl_factor(metric)
    if dt > bound:
        raise CFLViolation(f'dt={dt:.3e} is above the stability bound {bound:.3e}')
    if ref_derivs is None:
        ref_derivs = log_derivatives(reference)
    boundary = {k: v[0] for k, v in _state(reference).items()}

    def _rhs(state: dict) -> dict:
        return _checked_rhs(_metric(metric, state), reference, ref_derivs, blowup_threshold)

    def _stage(state: dict, rates: dict, factor: float) -> dict:
        return _impose(metric, boundary, _advance(state, rates, factor))

    y = _state(metric)
    k1 = _rhs(y)
    k2 = _rhs(_stage(y, k1, dt / 2))
    k3 = _rhs(_stage(y, k2, dt / 2))
    k4 = _rhs(_stage(y, k3, dt))
    combined = {k: (k1[k] + 2 * k2[k] + 2 * k3[k] + k4[k]) / 6 for k in y}
    result = _metric(metric, _stage(y, combined, dt))
    try:
        check_positive(result)
    except DegenerateMetric as e:
        raise PositivityLost(str(e)) from e
    return result


def _snapshot(
    trace: FlowTrace,
    t: float,
    metric: CohomOneMetric,
    ref_derivs: ProfileDerivatives,
):
    """Appends the diagnostics of one snapshot."""
    from renvol.flow.diagnostics import snapshot_record

    record, breakdown = snapshot_record(
        metric, trace.reference, trace.config, ref_derivs=ref_derivs,
        initial=trace.metrics[0] if trace.metrics else None,
    )
    record[TIME] = t
    trace.times.append(t)
    trace.metrics.append(metric)
    trace.breakdowns.append(breakdown)
    trace.records.append(record)


@timer_decorator
def run(initial: CohomOneMetric, config: FlowConfig | None = None) -> FlowTrace:
    """
    Integrates the flow from an initial metric and records diagnostics.

    Snapshots are taken at t=0, every snapshot_stride steps and at t_end.
    The trE evolution residual is filled in once the run is over.

    Parameters
    ----------
    initial : CohomOneMetric
        Initial metric, axis chart
    config : FlowConfig, optional
        Run settings, by default FlowConfig()

    Returns
    -------
    FlowTrace
        The recorded trace

    Raises
    ------
    NonAHMetric
        If APE is required and the initial metric is not AH
    CFLViolation, BlowupDetected, PositivityLost
        Propagated from step; the partial trace is attached as .trace
    """
    if config is None:
        config = FlowConfig()
    operation = begin_operation('run')
    reference = initial
    if config.require_ape:
        residual = ape_residual(initial)
        if not np.isfinite(residual):
            raise NonAHMetric('initial metric has no finite APE residual')

    factor = cfl_factor(initial)
    h = initial.grid.h
    if config.dt is None:
        dt = config.c_cfl * h ** 2 * factor
        steps = max(1, math.ceil(config.t_end / dt))
        dt = config.t_end / steps
    else:
        dt = config.dt
        steps = max(1, math.ceil(config.t_end / dt - 1e-9))
    logger.debug(
        f'...flow of {initial!r} with dt={dt:.3e}, {steps} steps to t={config.t_end}'
    )

    trace = FlowTrace(config=config, dt=dt, reference=reference)
    ref_derivs = log_derivatives(reference)
    _snapshot(trace, 0.0, initial, ref_derivs)
    metric = initial
    try:
        for i in progress_bar(range(1, steps + 1), desc='Ricci-DeTurck flow'):
            # the last step stops exactly at t_end
            size = min(dt, config.t_end - (i - 1) * dt)
            metric = step(
                metric, size, reference, ref_derivs,
                cfl_limit=config.cfl_limit,
                blowup_threshold=config.blowup_threshold,
            )
            if i % config.snapshot_stride == 0 or i == steps:
                _snapshot(trace, min(i * dt, config.t_end), metric, ref_derivs)
    except NumericalError as e:
        trace.error = f'{type(e).__name__}: {e}'
        logger.warning(f'flow stopped at t={trace.times[-1]:.6g}: {trace.error}')
        _finish(trace, operation)
        e.trace = trace  # type: ignore[attr-defined]
        raise
    _finish(trace, operation)
    return trace


def _finish(trace: FlowTrace, operation: dict):
    from renvol.flow.diagnostics import trE_residual_series

    if len(trace) >= 3:
        for record, value in zip(trace.records, trE_residual_series(trace)):
            record[TRE_RESIDUAL] = value
    trace.last_operation = end_operation(operation)

