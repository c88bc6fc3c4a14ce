"""
Integration operations.

gauss_legendre,
panel_quadrature,
cumulative_integral,
polynomial_tail

"""
from __future__ import annotations

from functools import lru_cache
from typing import Callable

import numpy as np
from numpy import ndarray
from scipy.interpolate import CubicSpline


@lru_cache(maxsize=None)
def gauss_legendre(order: int) -> tuple[ndarray, ndarray]:
    """
    Gauss-Legendre nodes and weights on [-1, 1].

    Parameters
    ----------
    order : int
        Number of nodes

    Returns
    -------
    tuple of ndarray
        Nodes and weights
    """
    nodes, weights = np.polynomial.legendre.leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def panel_quadrature(
    func: Callable[[ndarray], ndarray],
    breakpoints: ndarray,
    order: int = 4
) -> float:
    """
    Composite Gauss-Legendre rule over consecutive panels.

    Parameters
    ----------
    func : callable
        Vectorized integrand
    breakpoints : ndarray
        Increasing panel ends
    order : int, optional
        Nodes per panel, by default 4

    Returns
    -------
    float
        The integral from breakpoints[0] to breakpoints[-1]

    Examples
    --------
    >>> import numpy as np
    >>> from renvol.utils.integration import panel_quadrature
    >>> round(panel_quadrature(np.sin, np.linspace(0, np.pi, 5)), 12)
    2.0
    """
    breakpoints = np.asarray(breakpoints, dtype=float)
    if breakpoints.size < 2:
        return 0.0
    nodes, weights = gauss_legendre(order)
    left = breakpoints[:-1, None]
    half = 0.5 * np.diff(breakpoints)[:, None]
    points = left + half * (nodes[None, :] + 1.0)
    values = func(points.ravel()).reshape(points.shape)
    # summed panel by panel in a fixed order
    return float(np.sum(np.sum(values * weights[None, :], axis=1) * half[:, 0]))


def breakpoints_between(grid_points: ndarray, lower: float, upper: float) -> ndarray:
    """Panel ends from lower to upper that follow the grid nodes inside."""
    inner = grid_points[(grid_points > lower) & (grid_points < upper)]
    return np.concatenate([[lower], inner, [upper]])


def cumulative_integral(sigma: ndarray, integrand: ndarray) -> ndarray:
    """
    Running integral of nodal samples from the first node.

    Uses the antiderivative of the interpolating cubic spline.

    Parameters
    ----------
    sigma : ndarray
        Increasing nodes
    integrand : ndarray
        Samples at the nodes

    Returns
    -------
    ndarray
        Integral from sigma[0] to each node
    """
    spline = CubicSpline(sigma, integrand)
    antiderivative = spline.antiderivative()
    return antiderivative(sigma) - antiderivative(sigma[0])


def polynomial_tail(
    x: ndarray, density: ndarray, upper: float, degree: int = 3
) -> float:
    """
    Integral over [0, upper] of a polynomial fitted to density(x).

    Parameters
    ----------
    x : ndarray
        Sample abscissae, above upper
    density : ndarray
        Samples of the integrand
    upper : float
        Upper limit of the tail integral
    degree : int, optional
        Degree of the fitted polynomial, by default 3

    Returns
    -------
    float
        Tail integral
    """
    degree = min(degree, x.size - 1)
    coeffs = np.polynomial.polynomial.polyfit(x / upper, density, degree)
    powers = np.arange(degree + 1)
    return float(upper * np.sum(coeffs / (powers + 1)))
