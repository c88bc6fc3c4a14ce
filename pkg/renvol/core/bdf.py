"""
Special boundary defining functions.

SpecialBdf,
special_bdf,
bdf_residual,
graham_lee_normalize

"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import sqrt

import numpy as np
from numpy import ndarray
from scipy.interpolate import CubicSpline

from renvol.core.grid import RadialGrid
from renvol.core.metric import BoundaryRep, CohomOneMetric
from renvol.utils.constants import NORMAL_CHART, POINT_COLLAPSE, S2_X_S1, S3
from renvol.utils.errors import NonAHMetric, UnsupportedBoundary
from renvol.utils.integration import cumulative_integral
from renvol.utils.log import logger
from renvol.utils.math import derivatives

AH_TOLERANCE = 1e-6
CLASS_TOLERANCE = 1e-8


@dataclass(frozen=True, eq=False)
class SpecialBdf:
    """
    Special boundary defining function sampled on a grid.

    x_over_s is kept separately because it is finite and smooth at s=0.
    """

    grid: RadialGrid
    rep: BoundaryRep
    x: ndarray
    x_over_s: ndarray

    @property
    def x_max(self) -> float:
        """Value of x at the collapse locus."""
        return float(self.x[-1])

    @cached_property
    def _inverse(self) -> CubicSpline:
        return CubicSpline(self.x, self.grid.sigma)

    @cached_property
    def ratio_spline(self) -> CubicSpline:
        """x / s as a spline in sigma."""
        return CubicSpline(self.grid.sigma, self.x_over_s)

    def sigma_of_x(self, x: ndarray | float) -> ndarray:
        """Computational coordinate where the bdf takes the value x."""
        return np.clip(self._inverse(x), 0.0, 1.0)

    def x_of_sigma(self, sigma: ndarray | float) -> ndarray:
        """Bdf as a function of the computational coordinate."""
        return self.grid.s_of_sigma(sigma) * self.ratio_spline(sigma)


def _boundary_scale(metric: CohomOneMetric, rep: BoundaryRep) -> float:
    expected = S3 if metric.ansatz.variant == POINT_COLLAPSE else S2_X_S1
    if rep.kind != expected:
        raise UnsupportedBoundary(
            f'{metric.ansatz.variant} metrics need a {expected} representative, '
            f'got {rep.kind}'
        )
    scale = rep.sphere_radius / sqrt(metric.wbar[0])
    if rep.circle_length is not None:
        length = scale * sqrt(metric.vbar[0]) * metric.beta  # type: ignore
        if abs(length - rep.circle_length) > CLASS_TOLERANCE * rep.circle_length:
            raise ValueError(
                f'representative circle length {rep.circle_length} is not in the '
                f'conformal class, expected {length}'
            )
    return scale


def special_bdf(
    metric: CohomOneMetric, rep: BoundaryRep | None = None
) -> SpecialBdf:
    """
    Special boundary defining function of a metric.

    For the diagonal ansatz |dx|^2 = 1 in x^2 g reduces to
    d log x / ds = sqrt(Ubar) / s, integrated as

        log(x/s) = log(x/s)(0) + int_0^s (sqrt(Ubar) - 1) / s' ds',

    with (x/s)(0) fixed so that x^2 g restricts to rep on the boundary.

    Parameters
    ----------
    metric : CohomOneMetric
        An asymptotically hyperbolic metric
    rep : BoundaryRep, optional
        Representative of the conformal infinity,
        by default metric.default_rep()

    Returns
    -------
    SpecialBdf
        x and x/s at the nodes

    Raises
    ------
    NonAHMetric
        If Ubar(0) is not 1 or x fails to be increasing
    UnsupportedBoundary
        If rep does not match the topology of the metric

    Examples
    --------
    >>> from renvol.core.grid import make_grid
    >>> from renvol.core.models import hyperbolic_ball
    >>> from renvol.core.bdf import special_bdf
    >>> bdf = special_bdf(hyperbolic_ball(make_grid(65)))
    >>> round(bdf.x_max, 8)
    2.0
    """
    if rep is None:
        rep = metric.default_rep()
    grid = metric.grid
    s = grid.points
    u = metric.ubar
    if not np.isfinite(u[0]) or abs(u[0] - 1.0) > AH_TOLERANCE:
        raise NonAHMetric(f'|dx|^2 at the boundary is {u[0]}, expected 1')

    scale = _boundary_scale(metric, rep)
    d1, _ = derivatives(u, grid.h)
    integrand = np.empty_like(s)
    integrand[0] = d1[0] / grid.ds[0] / 2
    integrand[1:] = (np.sqrt(u[1:]) - 1.0) / s[1:]
    log_ratio = cumulative_integral(grid.sigma, integrand * grid.ds)

    x_over_s = scale * np.exp(log_ratio)
    x = s * x_over_s
    if not np.all(np.isfinite(x)) or np.any(np.diff(x) <= 0):
        raise NonAHMetric('special boundary defining function is not increasing')
    logger.debug(f'...special bdf with x_max={x[-1]:.6g}')
    return SpecialBdf(grid=grid, rep=rep, x=x, x_over_s=x_over_s)


def bdf_residual(metric: CohomOneMetric, bdf: SpecialBdf | None = None) -> float:
    """
    Sup over the nodes of | |dx|^2_{x^2 g} - 1 |.

    Parameters
    ----------
    metric : CohomOneMetric
        The metric
    bdf : SpecialBdf, optional
        Precomputed bdf, by default special_bdf(metric)

    Returns
    -------
    float
        Residual of the eikonal equation
    """
    if bdf is None:
        bdf = special_bdf(metric)
    grid = metric.grid
    y = bdf.x_over_s
    d1, _ = derivatives(y, grid.h)
    y_s = d1 / grid.ds
    norm2 = ((y + grid.points * y_s) / y) ** 2 / metric.ubar
    return float(np.max(np.abs(norm2 - 1.0)))


def graham_lee_normalize(
    metric: CohomOneMetric, rep: BoundaryRep | None = None
) -> CohomOneMetric:
    """
    Re-expresses a metric with the special bdf as radial coordinate.

    The new coordinate is s = x / x_max on the same grid, so that
    g = (dx^2 + h_x) / x^2 and Ubar is identically one. Profiles are
    resampled with cubic splines in the computational coordinate.

    Parameters
    ----------
    metric : CohomOneMetric
        An asymptotically hyperbolic metric
    rep : BoundaryRep, optional
        Representative of the conformal infinity,
        by default metric.default_rep()

    Returns
    -------
    CohomOneMetric
        Isometric metric in the 'normal' chart

    Raises
    ------
    NonAHMetric
        If the special bdf cannot be built
    """
    bdf = special_bdf(metric, rep)
    grid = metric.grid
    x_max = bdf.x_max
    target = bdf.sigma_of_x(x_max * grid.points)
    target[0], target[-1] = 0.0, 1.0
    ratio = bdf.ratio_spline(target) / x_max

    profiles = {
        name: CubicSpline(grid.sigma, values)(target) * ratio ** 2
        for name, values in metric.profiles().items()
    }
    profiles[metric.ansatz.collapsing][-1] = 0.0
    logger.debug(f'...normalized {metric!r} with x_scale={x_max:.6g}')
    return metric.with_profiles(np.ones(grid.n), profiles).replace(
        chart=NORMAL_CHART, x_scale=x_max
    )
