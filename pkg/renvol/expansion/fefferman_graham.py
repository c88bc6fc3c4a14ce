"""
Fefferman-Graham expansion.

FGData,
boundary_factors,
fit_expansion,
formal_expansion

The boundary metric h_x of g = (dx^2 + h_x) / x^2 splits into the sphere
and circle factors of the representative, each scaled by a function of x.
Coefficients are stored per factor as ratios to g0 on that factor, so
g_k = c_k g0 on the factor and tr_{g0} g_k = sum_k dim_k c_k.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import pi

import numpy as np
from numpy import ndarray
from scipy.interpolate import CubicSpline

from renvol.core.metric import BoundaryRep, CohomOneMetric
from renvol.utils.constants import CIRCLE, NORMAL_CHART, S2_X_S1, S3, SPHERE
from renvol.utils.errors import IllConditionedFit, NotNormalized, UnsupportedBoundary
from renvol.utils.log import logger

FACTOR_OF_FIBER = {'V': CIRCLE, 'W': SPHERE}
MAX_FIT_ORDER = 4
MAX_FORMAL_ORDER = 3
CONDITION_THRESHOLD = 1e8


@dataclass(frozen=True, eq=False)
class FGData:
    """
    Expansion data of one conformal representative.

    g maps an order k to the per-factor ratios c_k; v holds v0..v4, NaN
    where the method does not determine the coefficient.
    """

    rep: BoundaryRep
    dims: dict
    g: dict
    v: ndarray
    method: str
    condition: float = float('nan')
    residual: float = float('nan')
    window: tuple = ()
    v_guard: ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def g1(self) -> dict:
        """First order coefficient."""
        return self.g.get(1, {})

    @property
    def g2(self) -> dict:
        """Second order coefficient."""
        return self.g.get(2, {})

    @property
    def g3(self) -> dict:
        """Third order coefficient."""
        return self.g.get(3, {})

    def trace(self, order: int) -> float:
        """tr_{g0} g_order."""
        coeffs = self.g.get(order, {})
        return float(sum(self.dims[k] * c for k, c in coeffs.items()))

    def volume_coefficients(self) -> ndarray:
        """v0..v4 followed by any fitted guard terms."""
        return np.concatenate([self.v, self.v_guard])

    def to_dict(self) -> dict:
        """Serializes the data under plain keys."""
        return {
            'rep': self.rep.to_dict(),
            'method': self.method,
            'g': {str(k): dict(v) for k, v in self.g.items()},
            'v': [None if np.isnan(c) else float(c) for c in self.v],
            'trace_g3': self.trace(3) if 3 in self.g else None,
            'condition': None if np.isnan(self.condition) else self.condition,
            'residual': None if np.isnan(self.residual) else self.residual,
            'window': list(self.window),
        }


def boundary_factors(rep: BoundaryRep) -> list[tuple[str, int, float]]:
    """
    Factors of a product representative.

    Parameters
    ----------
    rep : BoundaryRep
        Representative of the conformal infinity

    Returns
    -------
    list of tuple
        (factor name, dimension, Ricci eigenvalue) per factor

    Raises
    ------
    UnsupportedBoundary
        If rep is not S2 x S1 or S3
    """
    if rep.kind == S2_X_S1:
        return [(SPHERE, 2, 1.0 / rep.sphere_radius ** 2), (CIRCLE, 1, 0.0)]
    if rep.kind == S3:
        return [(SPHERE, 3, 2.0 / rep.sphere_radius ** 2)]
    raise UnsupportedBoundary(f'no expansion for {rep.kind} boundary data')


def _chebyshev(lower: float, upper: float, count: int) -> ndarray:
    k = np.arange(count)
    nodes = np.cos(pi * (2 * k + 1) / (2 * count))
    return np.sort((lower + upper) / 2 + (upper - lower) / 2 * nodes)


def fit_expansion(
    metric: CohomOneMetric,
    order: int = MAX_FIT_ORDER,
    rep: BoundaryRep | None = None,
    samples: int = 64,
    guard: int = 2,
    window: tuple[float, float] | None = None,
) -> FGData:
    """
    Fits the boundary Taylor coefficients of a normalized metric.

    Each factor ratio h_x / g0 - 1 and the volume ratio
    sqrt(det h_x / det g0) - 1 are fitted by polynomials without constant
    term on Chebyshev samples of x in [2 h_x, min(0.1, x_max / 4)].
    The fit carries guard orders beyond the requested one to absorb the
    truncation of the series.

    Parameters
    ----------
    metric : CohomOneMetric
        Output of graham_lee_normalize
    order : int, optional
        Highest reported order, at most 4, by default 4
    rep : BoundaryRep, optional
        Representative recorded in the output,
        by default metric.default_rep()
    samples : int, optional
        Number of Chebyshev samples, by default 64
    guard : int, optional
        Extra fitted orders, by default 2
    window : tuple of float, optional
        Fit window in x, by default the one above

    Returns
    -------
    FGData
        Fitted coefficients with condition number and residual

    Raises
    ------
    NotNormalized
        If the metric is not in the normal chart
    IllConditionedFit
        If the scaled Vandermonde matrix has condition above 1e8
    """
    if metric.chart != NORMAL_CHART:
        raise NotNormalized('fit_expansion needs the output of graham_lee_normalize')
    if not 1 <= order <= MAX_FIT_ORDER:
        raise ValueError(f'order must be between 1 and {MAX_FIT_ORDER}, got {order}')
    if rep is None:
        rep = metric.default_rep()
    grid = metric.grid
    x_scale = float(metric.x_scale)  # type: ignore[arg-type]

    if window is None:
        lower = 2 * x_scale * grid.points[1]
        upper = min(0.1, x_scale / 4)
    else:
        lower, upper = window
    if not lower < upper / 2:
        raise IllConditionedFit(
            f'fit window [{lower:.3g}, {upper:.3g}] is too narrow for this grid'
        )
    x = _chebyshev(lower, upper, samples)
    sigma = grid.sigma_of_s(x / x_scale)

    degree = order + guard
    matrix = np.vander(x / upper, degree + 1, increasing=True)[:, 1:]
    condition = float(np.linalg.cond(matrix))
    if condition > CONDITION_THRESHOLD:
        raise IllConditionedFit(f'condition number {condition:.3e} is above threshold')
    scale = upper ** np.arange(1, degree + 1)

    def _fit(values: ndarray) -> tuple[ndarray, float]:
        coeffs, *_ = np.linalg.lstsq(matrix, values - 1.0, rcond=None)
        residual = float(np.max(np.abs(matrix @ coeffs - (values - 1.0))))
        return coeffs / scale, residual

    dims = {}
    g: dict = {k: {} for k in range(1, order + 1)}
    volume = np.ones_like(x)
    residual = 0.0
    for fiber in metric.ansatz.fibers:
        values = metric.profiles()[fiber.name]
        ratio = CubicSpline(grid.sigma, values)(sigma) / values[0]
        coeffs, res = _fit(ratio)
        factor = FACTOR_OF_FIBER[fiber.name]
        dims[factor] = fiber.dim
        for k in range(1, order + 1):
            g[k][factor] = float(coeffs[k - 1])
        volume = volume * ratio ** (fiber.dim / 2)
        residual = max(residual, res)

    v_coeffs, res = _fit(volume)
    residual = max(residual, res)
    v = np.full(MAX_FIT_ORDER + 1, np.nan)
    v[0] = 1.0
    v[1:order + 1] = v_coeffs[:order]
    logger.debug(
        f'...FG fit on [{lower:.3g}, {upper:.3g}], cond={condition:.3e}, '
        f'residual={residual:.3e}'
    )
    return FGData(
        rep=rep, dims=dims, g=g, v=v, method='fit', condition=condition,
        residual=residual, window=(lower, upper),
        v_guard=v_coeffs[order:] if order == MAX_FIT_ORDER else np.zeros(0),
    )


def formal_expansion(rep: BoundaryRep, order: int = 2) -> FGData:
    """
    Solves the Einstein recursion for product boundary data.

    At each order s the per-factor ratios c solve
    [(n - 1 - s) I + 1 d^T] c = rhs, with rhs = 0 at s=1 and
    rhs = -Ric(g0) eigenvalues at s=2. At s=3 the matrix is rank one and
    only the trace condition tr g3 = 0 follows; the trace-free part is
    left undetermined.

    Parameters
    ----------
    rep : BoundaryRep
        S2(rho) x S1(beta) or round S3(R)
    order : int, optional
        Highest order, at most 3, by default 2

    Returns
    -------
    FGData
        g1 = 0, g2 from the solve, v2 = tr g2 / 2; v3 = 0 when order is 3

    Raises
    ------
    UnsupportedBoundary
        For non-product data

    Examples
    --------
    >>> from renvol.core.metric import BoundaryRep
    >>> from renvol.expansion.fefferman_graham import formal_expansion
    >>> formal_expansion(BoundaryRep(1.0)).g2
    {'sphere': -0.5}
    """
    factors = boundary_factors(rep)
    if not 1 <= order <= MAX_FORMAL_ORDER:
        raise ValueError(f'order must be between 1 and {MAX_FORMAL_ORDER}, got {order}')
    names = [name for name, _, _ in factors]
    dims_vec = np.array([dim for _, dim, _ in factors], dtype=float)
    ric = np.array([value for _, _, value in factors])
    n = 4

    def _solve(step: int, rhs: ndarray) -> ndarray:
        matrix = (n - 1 - step) * np.eye(len(factors)) + np.outer(
            np.ones(len(factors)), dims_vec
        )
        return np.linalg.solve(matrix, rhs)

    g: dict = {1: dict(zip(names, _solve(1, np.zeros(len(factors))).tolist()))}
    v = np.full(MAX_FIT_ORDER + 1, np.nan)
    v[0], v[1] = 1.0, 0.0
    if order >= 2:
        c2 = _solve(2, -ric)
        g[2] = dict(zip(names, c2.tolist()))
        v[2] = 0.5 * float(dims_vec @ c2)
    if order >= 3:
        g[3] = {name: float('nan') for name in names}
        v[3] = 0.0
    dims = dict(zip(names, [int(d) for d in dims_vec]))
    logger.debug(f'...formal expansion for {rep.kind}: {g}')
    return FGData(rep=rep, dims=dims, g=g, v=v, method='formal')
