"""
Math operations.

fd_weights,
derivatives,
axis_limit,
limit_fit,
loglog_slope

"""
from __future__ import annotations

from functools import lru_cache
from math import factorial

import numpy as np
from numpy import ndarray

EVEN = 'even'
ODD = 'odd'
ONESIDED = 'onesided'

_CENTRAL_1 = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
_CENTRAL_2 = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0
# Lagrange weights in t^2 for the nodes t = 1, 2, 3, 4, evaluated at t = 0
_EVEN_LIMIT = np.array([1.6, -0.8, 8.0 / 35.0, -1.0 / 35.0])


@lru_cache(maxsize=None)
def fd_weights(offsets: tuple[int, ...], order: int) -> ndarray:
    """
    Finite difference weights for an arbitrary stencil.

    Solves the Vandermonde system of Taylor moments, so that
    sum(w[j] * f(x + offsets[j] * h)) approximates h**order * f^(order)(x).

    Parameters
    ----------
    offsets : tuple of int
        Stencil offsets in units of the grid spacing
    order : int
        Derivative order

    Returns
    -------
    ndarray
        Weights, one per offset

    Examples
    --------
    >>> from renvol.utils.math import fd_weights
    >>> fd_weights((-1, 0, 1), 2)
    array([ 1., -2.,  1.])
    """
    size = len(offsets)
    if order >= size:
        raise ValueError(
            f'{size} offsets cannot resolve a derivative of order {order}'
        )
    offs = np.asarray(offsets, dtype=float)
    matrix = np.array([offs ** i / factorial(i) for i in range(size)])
    rhs = np.zeros(size)
    rhs[order] = 1.0
    weights = np.linalg.solve(matrix, rhs)
    weights.setflags(write=False)
    return weights


def _extend(values: ndarray, right: str) -> ndarray:
    if right == EVEN:
        return np.concatenate([values, values[-2:-4:-1]])
    if right == ODD:
        return np.concatenate([values, -values[-2:-4:-1]])
    return values


def derivatives(
    values: ndarray, h: float, right: str = ONESIDED
) -> tuple[ndarray, ndarray]:
    """
    Fourth order first and second derivatives on a uniform grid.

    Interior nodes use the 5-point central stencils, the two leftmost nodes
    6-point one-sided stencils. At the right end the two last nodes use
    reflected ghosts ('even' or 'odd' parity about the last node) or
    one-sided stencils.

    Parameters
    ----------
    values : ndarray
        Samples on a uniform grid, at least 6 of them
    h : float
        Grid spacing
    right : str, optional
        Right end treatment, one of 'even', 'odd', 'onesided',
        by default 'onesided'

    Returns
    -------
    tuple of ndarray
        First and second derivatives

    Raises
    ------
    ValueError
        If the right end treatment is unknown or there are too few samples
    """
    if right not in (EVEN, ODD, ONESIDED):
        raise ValueError(f'unknown right end treatment {right}')
    values = np.asarray(values, dtype=float)
    size = values.size
    if size < 6:
        raise ValueError(f'need at least 6 samples, got {size}')

    ext = _extend(values, right)
    d1 = np.empty(size)
    d2 = np.empty(size)

    stop = size if right != ONESIDED else size - 2
    windows = np.lib.stride_tricks.sliding_window_view(ext, 5)
    d1[2:stop] = windows[:stop - 2] @ _CENTRAL_1
    d2[2:stop] = windows[:stop - 2] @ _CENTRAL_2

    for node, offsets in ((0, (0, 1, 2, 3, 4, 5)), (1, (-1, 0, 1, 2, 3, 4))):
        sample = values[[node + o for o in offsets]]
        d1[node] = sample @ fd_weights(offsets, 1)
        d2[node] = sample @ fd_weights(offsets, 2)

    if right == ONESIDED:
        for node, offsets in (
            (size - 2, (-4, -3, -2, -1, 0, 1)),
            (size - 1, (-5, -4, -3, -2, -1, 0))
        ):
            sample = values[[node + o for o in offsets]]
            d1[node] = sample @ fd_weights(offsets, 1)
            d2[node] = sample @ fd_weights(offsets, 2)

    return d1 / h, d2 / h ** 2


def axis_limit(values: ndarray) -> float:
    """
    Value at the last node of a function even about that node.

    Interpolates the four preceding nodes by a cubic polynomial in the
    squared distance to the last node, so the error is O(h^8).

    Parameters
    ----------
    values : ndarray
        Samples on a uniform grid; the last entry is ignored

    Returns
    -------
    float
        The extrapolated value

    Examples
    --------
    >>> import numpy as np
    >>> from renvol.utils.math import axis_limit
    >>> t = np.arange(5.0)[::-1]
    >>> round(axis_limit(1 + t ** 2 + t ** 6), 12)
    1.0
    """
    return float(np.asarray(values, dtype=float)[-2:-6:-1] @ _EVEN_LIMIT)


def limit_fit(
    eps: ndarray, values: ndarray, degree: int = 3
) -> tuple[ndarray, float]:
    """
    Fits values(eps) = c0 + c1 eps + ... + c_degree eps**degree.

    The limit eps -> 0 is c0. With more samples than coefficients the fit
    is a least squares one and the residual norm is returned.

    Parameters
    ----------
    eps : ndarray
        Regularization parameters, distinct and positive
    values : ndarray
        Regularized values
    degree : int, optional
        Polynomial degree of the remainder model, by default 3

    Returns
    -------
    tuple
        Coefficients (c0 first) and the residual norm

    Examples
    --------
    >>> import numpy as np
    >>> from renvol.utils.math import limit_fit
    >>> eps = np.array([0.1, 0.2, 0.4, 0.8])
    >>> coeffs, _ = limit_fit(eps, 2.0 + 3.0 * eps, degree=1)
    >>> round(coeffs[0], 12)
    2.0
    """
    eps = np.asarray(eps, dtype=float)
    values = np.asarray(values, dtype=float)
    if eps.size < degree + 1:
        raise ValueError(
            f'{eps.size} samples cannot fix {degree + 1} coefficients'
        )
    scale = eps.max()
    matrix = np.vander(eps / scale, degree + 1, increasing=True)
    coeffs, *_ = np.linalg.lstsq(matrix, values, rcond=None)
    residual = float(np.linalg.norm(matrix @ coeffs - values))
    return coeffs / scale ** np.arange(degree + 1), residual


def loglog_slope(x: ndarray, y: ndarray) -> float:
    """
    Least squares slope of log|y| against log x.

    Parameters
    ----------
    x : ndarray
        Positive abscissae
    y : ndarray
        Nonzero ordinates

    Returns
    -------
    float
        Fitted exponent p of |y| ~ C x**p
    """
    slope, _ = np.polyfit(np.log(x), np.log(np.abs(y)), 1)
    return float(slope)
