"""
Renormalized volume.

RenVBreakdown,
area_density,
volume_integral,
renv_hadamard,
renv_riesz,
renv_anderson,
reconcile

With the special bdf x of a representative the volume form reads
dV = A(x) x^-4 dx on the orbit space. A(0) is the volume of the
representative and A(x) / A(0) = v(x) = 1 + v2 x^2 + v4 x^4 + ...,
so Vol({x > eps}) diverges like A(0) (eps^-3 / 3 + v2 / eps).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy import ndarray
from scipy.interpolate import CubicSpline

from renvol.core.bdf import SpecialBdf, graham_lee_normalize, special_bdf
from renvol.core.curvature import CurvatureFields, curvature_of
from renvol.core.metric import BoundaryRep, CohomOneMetric
from renvol.expansion.fefferman_graham import FGData, fit_expansion, formal_expansion
from renvol.utils.constants import GAUSS_BONNET, HYPERBOLIC_RM2, NORMAL_CHART
from renvol.utils.errors import DivergentIntegral, FitUnstable, TooCoarse
from renvol.utils.integration import (
    breakpoints_between,
    panel_quadrature,
    polynomial_tail,
)
from renvol.utils.log import logger, timer_decorator
from renvol.utils.math import limit_fit, loglog_slope

FIT_TOLERANCE = 1e-4
LADDER_SIZE = 9
LADDER_DEGREE = 3
LADDER_RANGE = (0.001, 0.008)
LADDER_SHRINKS = 3
RIESZ_RANGE = (0.0005, 0.004)
RIESZ_SWEEP = 5
TAIL_CUT = 0.05
TAIL_DEGREE = 5
DIVERGENCE_SLOPE = -0.5


@dataclass(frozen=True)
class RenVBreakdown:
    """
    Renormalized volume by three routes.

    ledger holds the Hadamard counterterms c3, c1 with the extrapolation
    diagnostics; spread is the largest pairwise difference of the three
    values.
    """

    hadamard: float
    riesz: float
    anderson: float
    ledger: dict = field(default_factory=dict)
    riesz_spread: float = 0.0
    anderson_terms: dict = field(default_factory=dict)

    @property
    def values(self) -> dict:
        """Route values keyed by route name."""
        return {
            'hadamard': self.hadamard,
            'riesz': self.riesz,
            'anderson': self.anderson,
        }

    @property
    def spread(self) -> float:
        """Largest pairwise difference between the routes."""
        values = list(self.values.values())
        return float(max(values) - min(values))

    def to_dict(self) -> dict:
        """Serializes the breakdown."""
        return {
            **self.values,
            'agreementSpread': self.spread,
            'hadamard_ledger': self.ledger,
            'riesz_spread': self.riesz_spread,
            'anderson_terms': self.anderson_terms,
        }


def area_density(metric: CohomOneMetric, bdf: SpecialBdf) -> ndarray:
    """
    A(x) at the nodes, dV = A(x) x^-4 dx.

    Parameters
    ----------
    metric : CohomOneMetric
        The metric
    bdf : SpecialBdf
        Special bdf of the metric

    Returns
    -------
    ndarray
        Fiber volume times (x/s)^3 sqrt(Vbar) Wbar, or (x/s)^3 Wbar^(3/2)
    """
    ratio3 = bdf.x_over_s ** 3
    fiber = metric.ansatz.fiber_volume
    wbar = np.maximum(metric.wbar, 0.0)
    if metric.vbar is None:
        return fiber * wbar ** 1.5 * ratio3
    return fiber * np.sqrt(np.maximum(metric.vbar, 0.0)) * wbar * ratio3


def _x_sigma(metric: CohomOneMetric, bdf: SpecialBdf) -> ndarray:
    return bdf.x_over_s * np.sqrt(metric.ubar) * metric.grid.ds


def _outer_integral(
    metric: CohomOneMetric,
    bdf: SpecialBdf,
    density: ndarray,
    lower: float,
) -> float:
    """Integral over x in [lower, x_max] of a density sampled per dx."""
    grid = metric.grid
    first = int(np.searchsorted(bdf.x, 0.5 * lower))
    sigma = grid.sigma[first:]
    spline = CubicSpline(sigma, (density * _x_sigma(metric, bdf))[first:])
    start = float(bdf.sigma_of_x(lower))
    return panel_quadrature(spline, breakpoints_between(sigma, start, 1.0))


@timer_decorator
def volume_integral(
    metric: CohomOneMetric,
    values: ndarray,
    bdf: SpecialBdf | None = None,
    cut: float = TAIL_CUT,
    degree: int = TAIL_DEGREE,
) -> float:
    """
    Integral of a radial function against dV.

    The orbit integral is split at x_cut = cut * x_max, or at the fourth
    node when that lies further out. Above it the density is splined in the
    computational coordinate and integrated by Gauss-Legendre panels; below
    it a polynomial fitted to the density on [x_cut, 3 x_cut] is integrated
    exactly.

    Parameters
    ----------
    metric : CohomOneMetric
        The metric
    values : ndarray
        Function values at the nodes, decaying like x^4 or faster
    bdf : SpecialBdf, optional
        Special bdf, by default special_bdf(metric)
    cut : float, optional
        Relative split point, by default 0.05
    degree : int, optional
        Degree of the tail polynomial, by default 5

    Returns
    -------
    float
        The integral

    Raises
    ------
    DivergentIntegral
        If a density above the discretization tolerance grows faster than
        x^-1/2 towards x=0
    TooCoarse
        If the tail window holds fewer than two nodes
    """
    if bdf is None:
        bdf = special_bdf(metric)
    x = bdf.x
    with np.errstate(divide='ignore', invalid='ignore'):
        density = np.asarray(values) * area_density(metric, bdf) / x ** 4
    x_cut = max(cut * bdf.x_max, _floor(bdf))
    upper = 3 * x_cut
    window = (x >= x_cut) & (x <= upper)
    if window.sum() < 2:
        raise TooCoarse(f'{window.sum()} nodes in the tail window [{x_cut}, {upper}]')

    sample = density[window]
    # discretization noise alone never counts as a divergence
    floor = metric.grid.tolerance()
    size = float(np.max(np.abs(sample))) * upper
    if (
        float(np.max(np.abs(np.asarray(values)[window]))) > floor
        and size > floor * bdf.rep.area
        and (np.all(sample > 0) or np.all(sample < 0))
    ):
        slope = loglog_slope(x[window], sample)
        if slope < DIVERGENCE_SLOPE:
            raise DivergentIntegral(
                f'volume density behaves like x^{slope:.3g} near the boundary'
            )
    tail = polynomial_tail(x[window], sample, x_cut, degree)
    return tail + _outer_integral(metric, bdf, density, x_cut)


def _subtracted_density(
    metric: CohomOneMetric, bdf: SpecialBdf, v2: float
) -> ndarray:
    """(v - 1 - v2 x^2) / x^4 per dx, v = A(x) / A(0)."""
    x = bdf.x
    area = area_density(metric, bdf)
    with np.errstate(divide='ignore', invalid='ignore'):
        return (area / area[0] - 1.0 - v2 * x ** 2) / x ** 4


def _regularized(
    metric: CohomOneMetric,
    bdf: SpecialBdf,
    v2: float,
    eps: float,
    density: ndarray,
) -> float:
    """Vol({x > eps}) - c3 eps^-3 - c1 eps^-1."""
    x_max = bdf.x_max
    inner = _outer_integral(metric, bdf, density, eps)
    a0 = area_density(metric, bdf)[0]
    return float(a0 * (inner - x_max ** -3 / 3 - v2 / x_max))


def _floor(bdf: SpecialBdf) -> float:
    # smallest regularization parameter resolved by the grid
    return float(bdf.x[3])


def _ladder(bdf: SpecialBdf, bounds: tuple[float, float], size: int) -> ndarray:
    lower = max(bounds[0] * bdf.x_max, _floor(bdf))
    upper = max(bounds[1] * bdf.x_max, lower * bounds[1] / bounds[0])
    if upper >= bdf.x_max:
        raise TooCoarse('grid is too coarse to resolve the regularization ladder')
    return np.geomspace(lower, upper, size)


def _extrapolate(eps: ndarray, values: ndarray) -> tuple[float, float, float]:
    """Limit of the full ladder, its fit residual and the subset spread."""
    coeffs, residual = limit_fit(eps, values, LADDER_DEGREE)
    value = float(coeffs[0])
    half = eps.size // 2
    limits = [value] + [
        float(limit_fit(eps[part], values[part], LADDER_DEGREE)[0][0])
        for part in (slice(0, half + 1), slice(half, None))
    ]
    return value, residual, max(limits) - min(limits)


@timer_decorator
def renv_hadamard(
    metric: CohomOneMetric,
    rep: BoundaryRep | None = None,
    bdf: SpecialBdf | None = None,
    fg: FGData | None = None,
    ladder: int = LADDER_SIZE,
    fit_tol: float = FIT_TOLERANCE,
) -> tuple[float, dict]:
    """
    Renormalized volume by Hadamard counterterm subtraction.

    The counterterms c3 = A(0) / 3 and c1 = A(0) v2 come from the formal
    expansion of the representative. The regularized volume
    R(eps) = Vol({x > eps}) - c3 eps^-3 - c1 eps^-1 is evaluated on a
    geometric ladder and extrapolated to eps=0 by a cubic least squares
    fit. The same extrapolation on the lower and upper halves of the
    ladder measures its stability; while the halves disagree the ladder is
    halved, at most three times and never below the fourth node.

    Parameters
    ----------
    metric : CohomOneMetric
        An asymptotically hyperbolic metric
    rep : BoundaryRep, optional
        Representative of the conformal infinity,
        by default metric.default_rep()
    bdf : SpecialBdf, optional
        Precomputed special bdf, by default None
    fg : FGData, optional
        Fitted expansion, used only for the v2 cross-check,
        by default None
    ladder : int, optional
        Number of regularization parameters, by default 9
    fit_tol : float, optional
        Allowed relative disagreement of the subset extrapolations,
        by default 1e-4

    Returns
    -------
    tuple
        The value and the counterterm ledger

    Raises
    ------
    NonAHMetric
        If the special bdf cannot be built
    FitUnstable
        If the subset extrapolations disagree beyond fit_tol (1 + |RenV|)
    """
    if bdf is None:
        bdf = special_bdf(metric, rep)
    v2 = float(formal_expansion(bdf.rep).v[2])
    density = _subtracted_density(metric, bdf, v2)
    bounds = LADDER_RANGE
    eps = None
    for _ in range(LADDER_SHRINKS + 1):
        rungs = _ladder(bdf, bounds, ladder)
        if eps is not None and np.array_equal(rungs, eps):
            break
        eps = rungs
        values = np.array([_regularized(metric, bdf, v2, e, density) for e in eps])
        value, residual, spread = _extrapolate(eps, values)
        if spread <= fit_tol * (1.0 + abs(value)):
            break
        logger.debug(
            f'...ladder up to {eps[-1]:.3e} spreads by {spread:.3e}, shrinking'
        )
        bounds = (bounds[0] / 2, bounds[1] / 2)
    if not spread <= fit_tol * (1.0 + abs(value)):
        raise FitUnstable(
            f'ladder extrapolations spread by {spread:.3e} around {value:.9g}'
        )

    a0 = float(area_density(metric, bdf)[0])
    ledger = {
        'c3': a0 / 3.0,
        'c1': a0 * v2,
        'a0': a0,
        'v2': v2,
        'x_max': bdf.x_max,
        'eps': eps.tolist(),
        'regularized': values.tolist(),
        'fit_residual': residual,
        'subset_spread': spread,
    }
    if fg is not None:
        ledger['v2_fit'] = float(fg.v[2])
    logger.debug(f'...Hadamard RenV={value:.9g} (subset spread {spread:.3e})')
    return value, ledger


def _fitted_expansion(metric: CohomOneMetric, bdf: SpecialBdf) -> FGData:
    normal = metric
    if metric.chart != NORMAL_CHART:
        normal = graham_lee_normalize(metric, bdf.rep)
    return fit_expansion(normal, rep=bdf.rep)


@timer_decorator
def renv_riesz(
    metric: CohomOneMetric,
    rep: BoundaryRep | None = None,
    bdf: SpecialBdf | None = None,
    fg: FGData | None = None,
    sweep: int = RIESZ_SWEEP,
) -> tuple[float, float]:
    """
    Renormalized volume as the finite part of the Riesz zeta integral.

    zeta(z) = int x^z dV is split at x = delta. The outer part is taken
    at z=0, the inner part is integrated term by term against
    x^(z-4) A(0) (1 + v2 x^2 + v4 x^4 + ...), whose finite part at z=0 is

        -A(0) delta^-3 / 3 - A(0) v2 / delta + A(0) sum_k v_k delta^(k-3) / (k-3)

    with the sum over k >= 4 using the fitted coefficients.

    Parameters
    ----------
    metric : CohomOneMetric
        An asymptotically hyperbolic metric
    rep : BoundaryRep, optional
        Representative of the conformal infinity,
        by default metric.default_rep()
    bdf : SpecialBdf, optional
        Precomputed special bdf, by default None
    fg : FGData, optional
        Fitted expansion in the normal form for the same representative,
        by default computed
    sweep : int, optional
        Number of split points in [0.0005, 0.004] x_max, by default 5

    Returns
    -------
    tuple of float
        Mean value over the sweep and its spread

    Raises
    ------
    NonAHMetric
        If the special bdf cannot be built
    """
    if bdf is None:
        bdf = special_bdf(metric, rep)
    if fg is None:
        fg = _fitted_expansion(metric, bdf)
    v2 = float(formal_expansion(bdf.rep).v[2])
    density = _subtracted_density(metric, bdf, v2)
    a0 = float(area_density(metric, bdf)[0])
    higher = fg.volume_coefficients()[4:]
    powers = np.arange(1, higher.size + 1)

    deltas = _ladder(bdf, RIESZ_RANGE, sweep)
    values = np.array([
        _regularized(metric, bdf, v2, delta, density)
        + a0 * float(np.sum(higher * delta ** powers / powers))
        for delta in deltas
    ])
    value = float(np.mean(values))
    spread = float(np.ptp(values))
    logger.debug(f'...Riesz RenV={value:.9g} (sweep spread {spread:.3e})')
    return value, spread


@timer_decorator
def renv_anderson(
    metric: CohomOneMetric,
    rep: BoundaryRep | None = None,
    bdf: SpecialBdf | None = None,
    fields: CurvatureFields | None = None,
) -> tuple[float, dict]:
    """
    Renormalized volume by the Gauss-Bonnet type formula.

    RenV = (4 pi^2 / 3) chi(M) - (1/24) int (|Rm|^2 - 4 |Z|^2 - 24) dV

    Parameters
    ----------
    metric : CohomOneMetric
        An asymptotically hyperbolic metric, preferably in the axis chart
    rep : BoundaryRep, optional
        Representative used to split the integral,
        by default metric.default_rep()
    bdf : SpecialBdf, optional
        Precomputed special bdf, by default None
    fields : CurvatureFields, optional
        Precomputed curvature, by default None

    Returns
    -------
    tuple
        The value and its two terms

    Raises
    ------
    DivergentIntegral
        If the curvature integrand does not decay
    """
    if bdf is None:
        bdf = special_bdf(metric, rep)
    if fields is None:
        fields = curvature_of(metric)
    integrand = fields.rm2 - 4.0 * fields.z2 - HYPERBOLIC_RM2
    chi_term = GAUSS_BONNET * metric.ansatz.euler_char
    curvature_term = -volume_integral(metric, integrand, bdf) / 24.0
    value = chi_term + curvature_term
    logger.debug(f'...Anderson RenV={value:.9g}')
    return value, {'chi_term': chi_term, 'curvature_term': curvature_term}


@timer_decorator
def reconcile(
    metric: CohomOneMetric,
    rep: BoundaryRep | None = None,
    fields: CurvatureFields | None = None,
    fit_tol: float = FIT_TOLERANCE,
) -> RenVBreakdown:
    """
    Runs the three routes and reports their agreement.

    Parameters
    ----------
    metric : CohomOneMetric
        An asymptotically hyperbolic metric
    rep : BoundaryRep, optional
        Representative of the conformal infinity,
        by default metric.default_rep()
    fields : CurvatureFields, optional
        Precomputed curvature, by default None
    fit_tol : float, optional
        Relative tolerance of the Hadamard extrapolation, by default 1e-4

    Returns
    -------
    RenVBreakdown
        Values, ledgers and spreads

    Examples
    --------
    >>> from renvol.core.grid import make_grid
    >>> from renvol.core.models import hyperbolic_ball
    >>> from renvol.volume.renormalized import reconcile
    >>> breakdown = reconcile(hyperbolic_ball(make_grid(513)))
    >>> round(breakdown.hadamard, 4)
    13.1595
    """
    bdf = special_bdf(metric, rep)
    fg = _fitted_expansion(metric, bdf)
    hadamard, ledger = renv_hadamard(metric, bdf=bdf, fg=fg, fit_tol=fit_tol)
    riesz, riesz_spread = renv_riesz(metric, bdf=bdf, fg=fg)
    anderson, terms = renv_anderson(metric, bdf=bdf, fields=fields)
    breakdown = RenVBreakdown(
        hadamard=hadamard,
        riesz=riesz,
        anderson=anderson,
        ledger=ledger,
        riesz_spread=riesz_spread,
        anderson_terms=terms,
    )
    logger.debug(f'...routes agree within {breakdown.spread:.3e}')
    return breakdown
