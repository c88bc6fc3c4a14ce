"""
Run configuration.

RunConfig,
parse_config,
build_grid,
build_metric

"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any

from renvol.core.grid import RadialGrid, make_grid
from renvol.core.metric import CohomOneMetric, read_metric_json
from renvol.core.models import ads_schwarzschild, hyperbolic_ball, thermal_hyperbolic
from renvol.flow.perturbation import PerturbationSpec
from renvol.flow.ricci_deturck import FlowConfig
from renvol.utils.constants import (
    ADS_SCHWARZSCHILD,
    BH,
    CLUSTERINGS,
    FG,
    FLOW,
    HYPERBOLIC_BALL,
    METRIC_KINDS,
    MIN_GRID_POINTS,
    PERTURBATIONS,
    RENVOL,
    SNAPSHOT,
    SUBCOMMANDS,
    SWEEP,
    TANH,
    THERMAL_HYPERBOLIC,
)
from renvol.utils.errors import SchemaError

DEFAULT_GRID = {'N': 257, 'clustering': TANH, 'stretch': 2.0}
DEFAULT_OUT = 'out'

COMMON_KEYS = {'subcommand', 'out', 'tol', 'seed'}
SUBCOMMAND_KEYS = {
    BH: {'beta_min', 'beta_max', 'steps'},
    RENVOL: {'metric', 'grid'},
    FG: {'metric', 'grid', 'order'},
    FLOW: {'metric', 'grid', 'flow', 'perturbation'},
    SWEEP: {'metric', 'grid', 'flow', 'perturbation', 'runs'},
}
METRIC_PARAMETERS = {
    ADS_SCHWARZSCHILD: {'a'},
    THERMAL_HYPERBOLIC: {'beta'},
    HYPERBOLIC_BALL: set(),
    SNAPSHOT: {'path'},
}
GRID_KEYS = {'N', 'clustering', 'stretch'}
PERTURBATION_KEYS = {f.name for f in fields(PerturbationSpec)} | {'budget'}
FLOW_KEYS = {f.name for f in fields(FlowConfig)}


@dataclass(frozen=True)
class RunConfig:
    """
    A validated run.

    metric is the constructor spec {'kind', ...parameters}; perturbation
    without an 'amplitude' is drawn by sample_perturbation with seed.
    """

    subcommand: str
    out: Path = Path(DEFAULT_OUT)
    tol: float | None = None
    seed: int | None = None
    metric: dict | None = None
    grid: dict = field(default_factory=lambda: dict(DEFAULT_GRID))
    flow: FlowConfig | None = None
    perturbation: dict | None = None
    beta_min: float = 1.0
    beta_max: float = 3.5
    steps: int = 50
    order: int = 4
    runs: int = 3

    def to_dict(self) -> dict:
        """Returns the run in the config file format, defaults included."""
        data: dict[str, Any] = {
            'subcommand': self.subcommand,
            'out': str(self.out),
            'tol': self.tol,
            'seed': self.seed,
        }
        if self.subcommand == BH:
            data.update(beta_min=self.beta_min, beta_max=self.beta_max, steps=self.steps)
            return data
        data.update(metric=self.metric, grid=self.grid)
        if self.subcommand == FG:
            data['order'] = self.order
        if self.flow is not None:
            data['flow'] = self.flow.to_dict()
            data['perturbation'] = self.perturbation
        if self.subcommand == SWEEP:
            data['runs'] = self.runs
        return data


def _check_keys(data: dict, allowed: set, path: str):
    if not isinstance(data, dict):
        raise SchemaError(path or '/', 'expected an object')
    for key in sorted(data):
        if key not in allowed:
            raise SchemaError(f'{path}/{key}', 'unknown key')


def _number(data: dict, key: str, path: str, kind: type = float, positive: bool = True):
    value = data[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f'{path}/{key}', f'expected a number, got {value!r}')
    if kind is int and value != int(value):
        raise SchemaError(f'{path}/{key}', f'expected an integer, got {value!r}')
    if positive and not value > 0:
        raise SchemaError(f'{path}/{key}', f'must be positive, got {value!r}')
    return kind(value)


def _metric_spec(data: Any) -> dict:
    if data is None:
        raise SchemaError('/metric', 'required')
    _check_keys(data, {'kind'} | set().union(*METRIC_PARAMETERS.values()), '/metric')
    kind = data.get('kind')
    if kind not in METRIC_KINDS:
        raise SchemaError('/metric/kind', f'must be one of {METRIC_KINDS}, got {kind!r}')
    _check_keys(data, {'kind'} | METRIC_PARAMETERS[kind], '/metric')
    spec = {'kind': kind}
    for key in sorted(METRIC_PARAMETERS[kind]):
        if key not in data:
            raise SchemaError(f'/metric/{key}', 'required')
        if key == 'path':
            path = Path(data[key])
            if not path.is_file():
                raise FileNotFoundError(f'metric snapshot {path} does not exist')
            spec[key] = str(path)
        else:
            spec[key] = _number(data, key, '/metric')
    return spec


def _grid_spec(data: Any) -> dict:
    grid = dict(DEFAULT_GRID)
    if data is None:
        return grid
    _check_keys(data, GRID_KEYS, '/grid')
    grid.update(data)
    grid['N'] = _number(grid, 'N', '/grid', int)
    if grid['N'] < MIN_GRID_POINTS:
        raise SchemaError('/grid/N', f'must be at least {MIN_GRID_POINTS}')
    if grid['clustering'] not in CLUSTERINGS:
        raise SchemaError('/grid/clustering', f'must be one of {CLUSTERINGS}')
    grid['stretch'] = _number(grid, 'stretch', '/grid')
    return grid


def _flow_config(data: Any) -> FlowConfig:
    data = {} if data is None else data
    _check_keys(data, FLOW_KEYS, '/flow')
    try:
        return FlowConfig(**data)
    except (TypeError, ValueError) as e:
        raise SchemaError('/flow', str(e))


def _perturbation_spec(data: Any) -> dict | None:
    if data is None:
        return None
    _check_keys(data, PERTURBATION_KEYS, '/perturbation')
    if data.get('kind') not in PERTURBATIONS:
        raise SchemaError('/perturbation/kind', f'must be one of {PERTURBATIONS}')
    spec = dict(data)
    if 'components' in spec:
        spec['components'] = tuple(spec['components'])
    if 'budget' in spec:
        spec['budget'] = _number(spec, 'budget', '/perturbation', int)
    if 'amplitude' in spec:
        try:
            PerturbationSpec(**{k: v for k, v in spec.items() if k != 'budget'})
        except (TypeError, ValueError) as e:
            raise SchemaError('/perturbation', str(e))
    return spec


def parse_config(source: str | Path | dict, overrides: dict | None = None) -> RunConfig:
    """
    Validates a run configuration and fills in defaults.

    Parameters
    ----------
    source : str, Path or dict
        JSON file or its parsed content
    overrides : dict, optional
        Flag values: out, grid_n, seed, tol; None entries are ignored,
        by default None

    Returns
    -------
    RunConfig
        The validated run

    Raises
    ------
    SchemaError
        On unknown keys or invalid values, with the path of the entry
    FileNotFoundError
        If the config or a referenced snapshot does not exist

    Examples
    --------
    >>> from renvol.cli.config import parse_config
    >>> parse_config({'subcommand': 'bh', 'steps': 10}).beta_max
    3.5
    """
    if isinstance(source, dict):
        data = dict(source)
    else:
        path = Path(source)
        if not path.is_file():
            raise FileNotFoundError(f'config {path} does not exist')
        try:
            with open(path) as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise SchemaError('/', f'invalid JSON: {e}')
    _check_keys(data, set().union(COMMON_KEYS, *SUBCOMMAND_KEYS.values()), '')

    overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
    if 'grid_n' in overrides and data.get('subcommand') != BH:
        data['grid'] = {**(data.get('grid') or {}), 'N': overrides['grid_n']}
    overrides.pop('grid_n', None)
    data.update(overrides)

    subcommand = data.get('subcommand')
    if subcommand is None:
        raise SchemaError('/subcommand', 'required')
    if subcommand not in SUBCOMMANDS:
        raise SchemaError('/subcommand', f'must be one of {SUBCOMMANDS}, got {subcommand!r}')
    _check_keys(data, COMMON_KEYS | SUBCOMMAND_KEYS[subcommand], '')

    values: dict[str, Any] = {'subcommand': subcommand}
    values['out'] = Path(data.get('out', DEFAULT_OUT))
    if data.get('tol') is not None:
        values['tol'] = _number(data, 'tol', '')
    if data.get('seed') is not None:
        values['seed'] = _number(data, 'seed', '', int, positive=False)

    if subcommand == BH:
        for key in ('beta_min', 'beta_max'):
            if key in data:
                values[key] = _number(data, key, '')
        if 'steps' in data:
            values['steps'] = _number(data, 'steps', '', int)
        if values.get('beta_min', 1.0) > values.get('beta_max', 3.5):
            raise SchemaError('/beta_max', 'must not be below beta_min')
        return RunConfig(**values)

    values['metric'] = _metric_spec(data.get('metric'))
    values['grid'] = _grid_spec(data.get('grid'))
    if subcommand == FG and 'order' in data:
        values['order'] = _number(data, 'order', '', int)
        if values['order'] not in (2, 3, 4):
            raise SchemaError('/order', 'must be 2, 3 or 4')
    if subcommand in (FLOW, SWEEP):
        values['flow'] = _flow_config(data.get('flow'))
        values['perturbation'] = _perturbation_spec(data.get('perturbation'))
    if subcommand == SWEEP:
        if 'runs' in data:
            values['runs'] = _number(data, 'runs', '', int)
        if values['perturbation'] is None:
            raise SchemaError('/perturbation', 'required for a sweep')
    return RunConfig(**values)


def build_grid(config: RunConfig) -> RadialGrid:
    """Grid of a run."""
    grid = config.grid
    return make_grid(grid['N'], grid['clustering'], grid['stretch'])


def build_metric(config: RunConfig) -> CohomOneMetric:
    """
    Initial metric of a run.

    Parameters
    ----------
    config : RunConfig
        A run with a metric spec

    Returns
    -------
    CohomOneMetric
        The constructed or loaded metric
    """
    spec = config.metric
    if spec is None:
        raise SchemaError('/metric', 'required')
    kind = spec['kind']
    if kind == SNAPSHOT:
        return read_metric_json(spec['path'])
    grid = build_grid(config)
    if kind == ADS_SCHWARZSCHILD:
        return ads_schwarzschild(spec['a'], grid)
    if kind == THERMAL_HYPERBOLIC:
        return thermal_hyperbolic(spec['beta'], grid)
    return hyperbolic_ball(grid)
