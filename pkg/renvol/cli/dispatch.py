"""
Subcommand dispatch.

dispatch,
main

Every run writes summary.json in its output directory. Exit codes are
0 on success, 1 on usage errors and 2 on numerical failures, in which
case the partial outputs are still written.
"""
from __future__ import annotations

import argparse
import json
import os
from math import isfinite, pi
from pathlib import Path
from typing import Any, Callable

import numpy as np
from joblib import Parallel, delayed
from pandas import DataFrame

from renvol.cli.config import RunConfig, build_metric, parse_config
from renvol.core.bdf import graham_lee_normalize
from renvol.core.curvature import curvature_of
from renvol.core.metric import CohomOneMetric, save_metric_json
from renvol.expansion.fefferman_graham import fit_expansion, formal_expansion
from renvol.flow.diagnostics import (
    diag_bdf_drift,
    diag_boundary_persistence,
    diag_decay_persistence,
    diag_first_variation,
    diag_second_variation,
    diag_trE_evolution,
)
from renvol.flow.perturbation import PerturbationSpec, perturb, sample_perturbation
from renvol.flow.ricci_deturck import FlowTrace, run
from renvol.thermo.black_hole import (
    free_energy_check,
    hawking_page_transition,
    phase_table,
    renv_closed_form,
)
from renvol.utils.constants import (
    ADS_SCHWARZSCHILD,
    BETA,
    BH,
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_USAGE,
    FG,
    FLOW,
    GAUSS_BONNET,
    HYPERBOLIC_BALL,
    LARGE,
    MIN_SCALAR_GAP,
    MINIMIZER,
    ORDERED,
    PHASE_UNITS,
    RENV_HADAMARD,
    RENVOL,
    SWEEP,
    THERMAL,
    THERMAL_HYPERBOLIC,
    TRANSITION,
)
from renvol.utils.errors import NumericalError, RenvolError
from renvol.utils.log import logger, progress_bar, timer_decorator
from renvol.utils.tables import write_csv
from renvol.volume.renormalized import reconcile

SUMMARY = 'summary.json'
INDEX = 'index.json'
THREADS = 'RENVOL_THREADS'
ROUTE_TOLERANCE = 1e-4
IDENTITY_RADII = np.geomspace(0.05, 20.0, 200)


def _jsonable(value: Any) -> Any:
    """Plain JSON types, non finite floats as null."""
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value) if isfinite(value) else None
    if isinstance(value, Path):
        return str(value)
    return value


def write_json(data: dict, filename: str | Path):
    """
    Writes a JSON document with sorted keys.

    Parameters
    ----------
    data : dict
        The document
    filename : str or Path
        Destination file
    """
    with open(filename, 'w') as f:
        json.dump(_jsonable(data), f, sort_keys=True, indent=2)


def _optional(name: str, func: Callable, *args) -> Any:
    """Runs a diagnostic, None when the trace cannot support it."""
    try:
        return func(*args)
    except (NumericalError, ValueError) as e:
        logger.warning(f'{name} unavailable: {e}')
        return None


def _reference_renv(config: RunConfig) -> float | None:
    """Closed form RenV of the model metrics."""
    spec = config.metric or {}
    kind = spec.get('kind')
    if kind == ADS_SCHWARZSCHILD:
        return renv_closed_form(spec['a'])
    if kind == THERMAL_HYPERBOLIC:
        return 0.0
    if kind == HYPERBOLIC_BALL:
        return GAUSS_BONNET
    return None


def _run_bh(config: RunConfig) -> dict:
    table = phase_table(config.beta_min, config.beta_max, config.steps)
    write_csv(table, config.out / 'phase_table.csv', PHASE_UNITS)

    summary: dict[str, Any] = {'rows': len(table)}
    summary['identity_residual'] = max(free_energy_check(a) for a in IDENTITY_RADII)
    high = table[table[BETA] < pi]
    summary['ordering_holds'] = bool(high[ORDERED].all()) if len(high) else None
    summary['minimizers'] = sorted(set(table[MINIMIZER]))
    summary['transition_rows'] = table.index[table[TRANSITION]].tolist()
    if table[MINIMIZER].iloc[0] == LARGE and table[MINIMIZER].iloc[-1] == THERMAL:
        beta = hawking_page_transition(config.beta_min, config.beta_max)
        summary['transition_beta'] = beta
        summary['transition_error'] = abs(beta - pi)
    else:
        summary['transition_beta'] = None
    return summary


def _run_renvol(config: RunConfig) -> dict:
    metric = build_metric(config)
    fields = curvature_of(metric)
    save_metric_json(metric, config.out / 'metric.json', fields.to_dict())
    breakdown = reconcile(metric, fields=fields)
    reference = _reference_renv(config)
    result = {**breakdown.to_dict(), 'reference': reference}
    write_json(result, config.out / 'renv.json')

    table = DataFrame({'value': breakdown.values})
    summary: dict[str, Any] = {'values': breakdown.values, 'spread': breakdown.spread}
    if reference is not None:
        scale = abs(reference) if reference != 0 else 1.0
        errors = {k: abs(v - reference) / scale for k, v in breakdown.values.items()}
        table['error'] = list(errors.values())
        summary['reference'] = reference
        summary['errors'] = errors
        summary['within_tol'] = max(errors.values()) <= (config.tol or ROUTE_TOLERANCE)
    logger.info(f'Renormalized volume of {metric!r}\n{table.to_string()}')
    return summary


def _run_fg(config: RunConfig) -> dict:
    normal = graham_lee_normalize(build_metric(config))
    fitted = fit_expansion(normal, config.order)
    formal = formal_expansion(fitted.rep, min(config.order, 3))
    write_json({'fg': fitted.to_dict(), 'formal': formal.to_dict()}, config.out / 'fg.json')
    g2_mismatch = max(abs(fitted.g2[k] - formal.g2[k]) for k in formal.g2)
    summary: dict[str, Any] = {
        'g2_mismatch': g2_mismatch,
        'v2_mismatch': abs(fitted.v[2] - formal.v[2]),
        'condition': fitted.condition,
        'fit_residual': fitted.residual,
    }
    if config.order >= 3:
        summary['trace_g3'] = fitted.trace(3)
    return summary


def _initial_metric(config: RunConfig, seed: int | None) -> tuple[CohomOneMetric, dict]:
    metric = build_metric(config)
    spec = config.perturbation
    if spec is None:
        return metric, {}
    require_ape = config.flow.require_ape if config.flow else True
    if 'amplitude' in spec:
        profile = PerturbationSpec(**{k: v for k, v in spec.items() if k != 'budget'})
        return perturb(metric, profile, require_ape), profile.to_dict()
    metric, profile = sample_perturbation(
        metric, spec['kind'], budget=spec.get('budget', 50), seed=seed,
        require_ape=require_ape,
    )
    return metric, profile.to_dict()


def _flow_summary(trace: FlowTrace, tol: float | None) -> dict:
    initial = trace.metrics[0]
    h = initial.grid.h
    tol = tol if tol is not None else initial.grid.tolerance()
    renv = trace.column(RENV_HADAMARD)
    gap = trace.column(MIN_SCALAR_GAP)
    span = trace.times[-1] if trace.times else 0.0
    tol_mono = 10.0 * (h ** 2 + trace.dt ** 2) * max(span, trace.dt)
    increase = float(np.nanmax(np.diff(renv))) if len(renv) > 1 else 0.0
    last = trace.metrics[-1]
    metric_drift = max(
        float(np.max(np.abs(b - a)) / np.max(np.abs(a)))
        for a, b in [(initial.ubar, last.ubar)]
        + [(initial.profiles()[k], v) for k, v in last.profiles().items()]
    )
    renv_drift = float(np.nanmax(np.abs(renv - renv[0])))
    decay = _optional('decay persistence', diag_decay_persistence, trace)
    return {
        'snapshots': len(trace),
        'dt': trace.dt,
        't_final': span,
        'error': trace.error,
        'tol': tol,
        'renv_initial': renv[0],
        'renv_final': renv[-1],
        'renv_drift': renv_drift,
        'renv_drift_within_tol': renv_drift <= tol,
        'metric_drift': metric_drift,
        'monotone': bool(gap[0] < 0 or increase <= tol_mono),
        'renv_max_increase': increase,
        'tol_mono': tol_mono,
        'min_scalar_gap_initial': gap[0],
        'min_scalar_gap': float(np.nanmin(gap)),
        'minimum_principle': bool(gap[0] < 0 or np.nanmin(gap) >= -10 * tol),
        'first_variation_residual': _optional(
            'first variation', diag_first_variation, trace
        ),
        'second_variation_residual': _optional(
            'second variation', diag_second_variation, trace
        ),
        'trE_evolution_residual': _optional('trE evolution', diag_trE_evolution, trace),
        'decay_ratio': None if decay is None else decay[1],
        'bdf_drift_slope': _optional('bdf drift', diag_bdf_drift, trace),
        'boundary_persistence': _optional(
            'boundary persistence', diag_boundary_persistence, trace
        ),
    }


def _write_trace(trace: FlowTrace, out: Path):
    trace.to_csv(out / 'trace.csv')
    snapshots = out / 'snapshots'
    snapshots.mkdir(parents=True, exist_ok=True)
    for k, metric in enumerate(trace.metrics):
        save_metric_json(metric, snapshots / f'metric_{k:04d}.json')


def _flow_once(config: RunConfig, out: Path, seed: int | None) -> tuple[int, dict]:
    """One flow run writing its trace, snapshots and summary into out."""
    out.mkdir(parents=True, exist_ok=True)
    metric, profile = _initial_metric(config, seed)
    code = EXIT_OK
    try:
        trace = run(metric, config.flow)
    except NumericalError as e:
        trace = getattr(e, 'trace', None)
        if trace is None:
            raise
        code = EXIT_NUMERICAL
    _write_trace(trace, out)
    if trace.last_operation is not None:
        logger.debug(f'...flow resources {trace.last_operation}')
    summary = {'perturbation': profile, 'seed': seed, **_flow_summary(trace, config.tol)}
    return code, summary


def _run_flow(config: RunConfig) -> tuple[int, dict]:
    return _flow_once(config, config.out, config.seed)


def _sweep_member(config: RunConfig, index: int) -> dict:
    out = config.out / f'run_{index:03d}'
    seed = (config.seed or 0) + index
    try:
        code, summary = _flow_once(config, out, seed)
    except NumericalError as e:
        code, summary = EXIT_NUMERICAL, {'error': f'{type(e).__name__}: {e}', 'seed': seed}
    summary['exit_code'] = code
    write_json(summary, out / SUMMARY)
    return {'run': index, 'path': out.name, 'exit_code': code, 'seed': seed}


def _run_sweep(config: RunConfig) -> tuple[int, dict]:
    n_jobs = max(1, min(config.runs, int(os.getenv(THREADS, '1'))))
    logger.debug(f'...sweep of {config.runs} runs on {n_jobs} workers')
    entries = Parallel(n_jobs=n_jobs)(
        delayed(_sweep_member)(config, i)
        for i in progress_bar(range(config.runs), desc='Sweep')
    )
    entries = sorted(entries, key=lambda e: e['run'])
    staging = config.out / f'{INDEX}.tmp'
    write_json({'runs': entries}, staging)
    os.replace(staging, config.out / INDEX)
    code = max(e['exit_code'] for e in entries)
    return code, {'runs': entries, 'failed': sum(e['exit_code'] != EXIT_OK for e in entries)}


@timer_decorator
def dispatch(config: RunConfig) -> int:
    """
    Runs a validated configuration and writes its outputs.

    Parameters
    ----------
    config : RunConfig
        The run

    Returns
    -------
    int
        0 on success, 2 on a numerical failure, 1 on invalid input
        discovered while running
    """
    config.out.mkdir(parents=True, exist_ok=True)
    logger.debug(f'...dispatching {config.subcommand} into {config.out}')
    code = EXIT_OK
    try:
        if config.subcommand == BH:
            summary = _run_bh(config)
        elif config.subcommand == RENVOL:
            summary = _run_renvol(config)
        elif config.subcommand == FG:
            summary = _run_fg(config)
        elif config.subcommand == FLOW:
            code, summary = _run_flow(config)
        elif config.subcommand == SWEEP:
            code, summary = _run_sweep(config)
        else:
            raise ValueError(f'unknown subcommand {config.subcommand}')
    except NumericalError as e:
        logger.error(f'{config.subcommand} failed: {type(e).__name__}: {e}')
        code, summary = EXIT_NUMERICAL, {'error': f'{type(e).__name__}: {e}'}
    except (RenvolError, ValueError, FileNotFoundError) as e:
        logger.error(f'{config.subcommand} rejected its input: {e}')
        code, summary = EXIT_USAGE, {'error': f'{type(e).__name__}: {e}'}
    summary = {
        'subcommand': config.subcommand,
        'config': config.to_dict(),
        'exit_code': code,
        **summary,
    }
    write_json(summary, config.out / SUMMARY)
    return code


def main(argv: list[str] | None = None) -> int:
    """
    Command line entry point.

    Parameters
    ----------
    argv : list of str, optional
        Arguments, by default sys.argv[1:]

    Returns
    -------
    int
        Exit code
    """
    parser = argparse.ArgumentParser(
        prog='renvol',
        description='Renormalized volume and normalized Ricci-DeTurck flow lab',
    )
    parser.add_argument('--config', type=Path, required=True, help='JSON run configuration')
    parser.add_argument('--out', type=Path, help='Output directory')
    parser.add_argument('--grid-n', type=int, help='Number of grid nodes')
    parser.add_argument('--seed', type=int, help='Seed of the perturbation sampler')
    parser.add_argument('--tol', type=float, help='Tolerance of the summary checks')
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE

    overrides = {
        'out': None if args.out is None else str(args.out),
        'grid_n': args.grid_n,
        'seed': args.seed,
        'tol': args.tol,
    }
    try:
        config = parse_config(args.config, overrides)
    except (RenvolError, FileNotFoundError) as e:
        logger.error(f'invalid configuration: {e}')
        return EXIT_USAGE
    return dispatch(config)
