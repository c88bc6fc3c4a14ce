"""
Model Einstein metrics.

hyperbolic_ball,
thermal_hyperbolic,
ads_schwarzschild,
ads_mass,
ads_beta,
ads_radius

"""
from __future__ import annotations

from math import pi

import numpy as np
from numpy import ndarray

from renvol.core.grid import RadialGrid
from renvol.core.metric import Ansatz, CohomOneMetric
from renvol.utils.constants import CIRCLE_COLLAPSE, POINT_COLLAPSE, SPHERE_COLLAPSE
from renvol.utils.log import logger


def hyperbolic_ball(grid: RadialGrid) -> CohomOneMetric:
    """
    Hyperbolic space in polar form, dr^2 + sinh(r)^2 g_S3.

    The radius is r = 2 artanh(1 - s), so the center sits at s=1.

    Parameters
    ----------
    grid : RadialGrid
        Radial grid

    Returns
    -------
    CohomOneMetric
        Point collapse metric of constant curvature -1

    Examples
    --------
    >>> from renvol.core.grid import make_grid
    >>> from renvol.core.models import hyperbolic_ball
    >>> hyperbolic_ball(make_grid(17)).ansatz.euler_char
    1
    """
    s = grid.points
    logger.debug('...building hyperbolic ball')
    return CohomOneMetric(
        grid=grid,
        ansatz=Ansatz(POINT_COLLAPSE),
        ubar=4.0 / (2.0 - s) ** 2,
        vbar=None,
        wbar=4.0 * (1.0 - s) ** 2 / (2.0 - s) ** 2,
    )


def thermal_hyperbolic(beta: float, grid: RadialGrid) -> CohomOneMetric:
    """
    Quotient of hyperbolic space by a dilation of length beta.

    Fermi coordinates about the core geodesic,
    dr^2 + cosh(r)^2 dtau^2 + sinh(r)^2 g_S2, with r = 2 artanh(1 - s).

    Parameters
    ----------
    beta : float
        Period of tau
    grid : RadialGrid
        Radial grid

    Returns
    -------
    CohomOneMetric
        Sphere collapse metric of constant curvature -1
    """
    s = grid.points
    logger.debug(f'...building thermal hyperbolic space with beta={beta}')
    return CohomOneMetric(
        grid=grid,
        ansatz=Ansatz(SPHERE_COLLAPSE, float(beta)),
        ubar=4.0 / (2.0 - s) ** 2,
        vbar=(1.0 + (1.0 - s) ** 2) ** 2 / (2.0 - s) ** 2,
        wbar=4.0 * (1.0 - s) ** 2 / (2.0 - s) ** 2,
    )


def ads_mass(a: float) -> float:
    """Mass of the black hole with horizon radius a."""
    return (a ** 3 + a) / 2.0


def ads_beta(a: float) -> float:
    """Smooth circle period of the black hole with horizon radius a."""
    return 4 * pi * a / (3 * a ** 2 + 1)


def ads_radius(a: float, s: ndarray) -> ndarray:
    """Areal radius r = a / (s (2 - s)) at the nodes."""
    with np.errstate(divide='ignore'):
        return a / (s * (2.0 - s))


def ads_schwarzschild(a: float, grid: RadialGrid) -> CohomOneMetric:
    """
    AdS-Schwarzschild metric normalized to Rc = -3g.

    g = dr^2 / V + V dtau^2 + r^2 g_S2 with V = 1 + r^2 - 2m/r,
    m = (a^3 + a)/2, on r = a / (s (2 - s)) so that the horizon r=a sits
    at s=1 and tau has the cone-free period 4 pi a / (3 a^2 + 1).

    Parameters
    ----------
    a : float
        Horizon radius, positive
    grid : RadialGrid
        Radial grid

    Returns
    -------
    CohomOneMetric
        Circle collapse metric

    Raises
    ------
    ValueError
        If a is not positive

    Examples
    --------
    >>> from renvol.core.grid import make_grid
    >>> from renvol.core.models import ads_schwarzschild
    >>> round(ads_schwarzschild(1.0, make_grid(17)).beta, 12)
    3.14159265359
    """
    if not a > 0:
        raise ValueError(f'horizon radius must be positive, got {a}')
    s = grid.points
    w = s * (2.0 - s)
    # V = (1 - s)^2 P / w^2 and dr^2 / V = 4 a^2 ds^2 / (w^2 P)
    poly = a ** 2 + a ** 2 * w + (a ** 2 + 1.0) * w ** 2
    logger.debug(f'...building AdS-Schwarzschild with a={a}, m={ads_mass(a)}')
    return CohomOneMetric(
        grid=grid,
        ansatz=Ansatz(CIRCLE_COLLAPSE, ads_beta(a)),
        ubar=4.0 * a ** 2 / ((2.0 - s) ** 2 * poly),
        vbar=(1.0 - s) ** 2 * poly / (2.0 - s) ** 2,
        wbar=a ** 2 / (2.0 - s) ** 2 * np.ones_like(s),
    )
