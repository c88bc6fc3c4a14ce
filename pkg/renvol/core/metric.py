"""
Cohomogeneity-one metric types.

Fiber,
Ansatz,
BoundaryRep,
CohomOneMetric,
save_metric_json,
read_metric_json

"""
from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from math import pi, sqrt
from pathlib import Path
from typing import Any

import numpy as np
from numpy import ndarray

from renvol.core.grid import RadialGrid
from renvol.utils.constants import (
    AXIS_CHART,
    CHARTS,
    CIRCLE,
    CIRCLE_COLLAPSE,
    EULER_CHAR,
    NORMAL_CHART,
    POINT_COLLAPSE,
    S2_X_S1,
    S3,
    SPHERE,
    UBAR,
    UNIT_S2_AREA,
    UNIT_S3_VOLUME,
    VARIANTS,
    VBAR,
    WBAR,
)
from renvol.utils.log import logger


@dataclass(frozen=True)
class Fiber:
    """
    One homogeneous factor of the orbits.

    name is the profile key ('V' or 'W'), dim the factor dimension and
    kappa the sectional curvature of its unit model (0 for the circle).
    """

    name: str
    dim: int
    kappa: float


_CIRCLE_FIBER = Fiber('V', 1, 0.0)
_S2_FIBER = Fiber('W', 2, 1.0)
_S3_FIBER = Fiber('W', 3, 1.0)


@dataclass(frozen=True)
class Ansatz:
    """Topology and symmetry type of a cohomogeneity-one metric."""

    variant: str
    beta: float | None = None

    def __post_init__(self):
        """Validates the variant and the circle period."""
        if self.variant not in VARIANTS:
            raise ValueError(f'variant must be one of {VARIANTS}, got {self.variant}')
        if self.variant == POINT_COLLAPSE:
            if self.beta is not None:
                raise ValueError('point_collapse carries no circle period')
        elif self.beta is None or not self.beta > 0:
            raise ValueError(f'circle period must be positive, got {self.beta}')

    @property
    def euler_char(self) -> int:
        """Euler characteristic of the bulk."""
        return EULER_CHAR[self.variant]

    @property
    def fibers(self) -> tuple[Fiber, ...]:
        """Fiber factors, circle first when present."""
        if self.variant == POINT_COLLAPSE:
            return (_S3_FIBER,)
        return (_CIRCLE_FIBER, _S2_FIBER)

    @property
    def collapsing(self) -> str:
        """Name of the profile that vanishes at s=1."""
        return 'V' if self.variant == CIRCLE_COLLAPSE else 'W'

    @property
    def cone_slope(self) -> float:
        """Required d(sqrt G)/d(proper distance) of the collapsing factor."""
        if self.variant == CIRCLE_COLLAPSE:
            return 2 * pi / self.beta  # type: ignore[operator]
        return 1.0

    @property
    def fiber_volume(self) -> float:
        """Volume of the unit fiber, tau period included."""
        if self.variant == POINT_COLLAPSE:
            return UNIT_S3_VOLUME
        return self.beta * UNIT_S2_AREA  # type: ignore[operator]


@dataclass(frozen=True)
class BoundaryRep:
    """
    A metric in the conformal infinity.

    S2(sphere_radius) x S1(circle_length), or the round S3(sphere_radius)
    when circle_length is None. Other kinds may be named for bookkeeping;
    only the two products are understood by the expansion code.
    """

    sphere_radius: float
    circle_length: float | None = None
    kind: str = ''

    def __post_init__(self):
        """Checks the entries and fills the kind."""
        if not self.sphere_radius > 0:
            raise ValueError(f'sphere radius must be positive, got {self.sphere_radius}')
        if self.circle_length is not None and not self.circle_length > 0:
            raise ValueError(
                f'circle length must be positive, got {self.circle_length}'
            )
        if not self.kind:
            kind = S3 if self.circle_length is None else S2_X_S1
            object.__setattr__(self, 'kind', kind)
        elif self.kind == S2_X_S1 and self.circle_length is None:
            raise ValueError('S2xS1 representative needs a circle length')
        elif self.kind == S3 and self.circle_length is not None:
            raise ValueError('S3 representative has no circle length')

    @property
    def area(self) -> float:
        """Volume of the representative."""
        if self.circle_length is None:
            return UNIT_S3_VOLUME * self.sphere_radius ** 3
        return UNIT_S2_AREA * self.sphere_radius ** 2 * self.circle_length

    def scaled(self, factor: float) -> 'BoundaryRep':
        """Representative of the same class scaled by a constant."""
        circle = None if self.circle_length is None else self.circle_length * factor
        return BoundaryRep(self.sphere_radius * factor, circle, self.kind)

    def to_dict(self) -> dict:
        """Returns the representative in a dict format."""
        return {
            'kind': self.kind,
            'sphere_radius': self.sphere_radius,
            'circle_length': self.circle_length,
        }


@dataclass(frozen=True, eq=False)
class CohomOneMetric:
    """
    Diagonal cohomogeneity-one 4-metric on a radial grid.

    g = s^-2 (Ubar ds^2 + Vbar dtau^2 + Wbar g_S2), or
    g = s^-2 (Ubar ds^2 + Wbar g_S3) for point collapse.

    In the 'axis' chart the collapse at s=1 is a parity point of the
    profiles divided by s^2. The 'normal' chart is the Graham-Lee form,
    with s = x / x_scale and Ubar identically one.
    """

    grid: RadialGrid
    ansatz: Ansatz
    ubar: ndarray
    vbar: ndarray | None
    wbar: ndarray
    chart: str = AXIS_CHART
    x_scale: float | None = None

    def __post_init__(self):
        """Freezes the profiles and checks their shapes."""
        if self.chart not in CHARTS:
            raise ValueError(f'chart must be one of {CHARTS}, got {self.chart}')
        if self.chart == NORMAL_CHART and not (self.x_scale and self.x_scale > 0):
            raise ValueError('normal chart metrics need a positive x_scale')
        if (self.vbar is None) != (self.ansatz.variant == POINT_COLLAPSE):
            raise ValueError('Vbar must be given exactly when a circle fiber exists')
        for name in ('ubar', 'vbar', 'wbar'):
            values = getattr(self, name)
            if values is None:
                continue
            values = np.array(values, dtype=float)
            if values.shape != (self.grid.n,):
                raise ValueError(
                    f'{name} has shape {values.shape}, expected ({self.grid.n},)'
                )
            values.setflags(write=False)
            object.__setattr__(self, name, values)

    @property
    def beta(self) -> float | None:
        """Circle period."""
        return self.ansatz.beta

    @property
    def s(self) -> ndarray:
        """Grid nodes."""
        return self.grid.points

    def profiles(self) -> dict[str, ndarray]:
        """Fiber profiles keyed by fiber name."""
        return {
            fiber.name: self.vbar if fiber.name == 'V' else self.wbar
            for fiber in self.ansatz.fibers
        }

    def replace(self, **changes: Any) -> 'CohomOneMetric':
        """Copy with some fields replaced."""
        return dataclasses.replace(self, **changes)

    def with_profiles(
        self, ubar: ndarray, profiles: dict[str, ndarray]
    ) -> 'CohomOneMetric':
        """Copy with new coefficient profiles."""
        return self.replace(
            ubar=ubar, vbar=profiles.get('V'), wbar=profiles['W']
        )

    def default_rep(self) -> BoundaryRep:
        """
        Unit representative of the conformal infinity.

        S3(1) for point collapse; otherwise S2(1) x S1 with the circle
        length fixed by the ratio of the boundary values of Vbar and Wbar.
        """
        if self.ansatz.variant == POINT_COLLAPSE:
            return BoundaryRep(1.0)
        ratio = sqrt(self.vbar[0] / self.wbar[0])  # type: ignore[index]
        return BoundaryRep(1.0, self.beta * ratio)  # type: ignore[operator]

    def to_dict(self, curvature: dict | None = None) -> dict:
        """
        Returns the metric in the snapshot format.

        Parameters
        ----------
        curvature : dict, optional
            Serialized CurvatureFields stored under 'curvature',
            by default None

        Returns
        -------
        dict
            {ansatz, beta, grid, Ubar, Vbar, Wbar, chart, x_scale}
        """
        data = {
            'ansatz': self.ansatz.variant,
            'beta': self.beta,
            'grid': self.grid.to_dict(),
            UBAR: self.ubar.tolist(),
            VBAR: None if self.vbar is None else self.vbar.tolist(),
            WBAR: self.wbar.tolist(),
            'chart': self.chart,
            'x_scale': self.x_scale,
        }
        if curvature is not None:
            data['curvature'] = curvature
        return data

    @classmethod
    def from_dict(cls, data: dict) -> 'CohomOneMetric':
        """Builds a metric from the snapshot format."""
        vbar = data.get(VBAR)
        return cls(
            grid=RadialGrid.from_dict(data['grid']),
            ansatz=Ansatz(data['ansatz'], data.get('beta')),
            ubar=np.asarray(data[UBAR], dtype=float),
            vbar=None if vbar is None else np.asarray(vbar, dtype=float),
            wbar=np.asarray(data[WBAR], dtype=float),
            chart=data.get('chart', AXIS_CHART),
            x_scale=data.get('x_scale'),
        )

    def __repr__(self) -> str:
        """Short description of the metric."""
        beta = '' if self.beta is None else f', beta={self.beta:.6g}'
        return (
            f'CohomOneMetric({self.ansatz.variant}{beta}, '
            f'N={self.grid.n}, {self.grid.clustering}, chart={self.chart})'
        )


def save_metric_json(
    metric: CohomOneMetric, filename: str | Path, curvature: dict | None = None
):
    """
    Writes a metric snapshot as JSON.

    Parameters
    ----------
    metric : CohomOneMetric
        The metric
    filename : str or Path
        Destination file
    curvature : dict, optional
        Serialized curvature block, by default None
    """
    logger.debug(f'...writing metric snapshot to {filename}')
    with open(filename, 'w') as f:
        json.dump(metric.to_dict(curvature), f, sort_keys=True)


def read_metric_json(filename: str | Path) -> CohomOneMetric:
    """
    Reads a metric snapshot written by save_metric_json.

    Parameters
    ----------
    filename : str or Path
        Snapshot file

    Returns
    -------
    CohomOneMetric
        The metric

    Raises
    ------
    FileNotFoundError
        If the file does not exist
    """
    with open(filename) as f:
        return CohomOneMetric.from_dict(json.load(f))


FIBER_LABELS = {'V': CIRCLE, 'W': SPHERE}
