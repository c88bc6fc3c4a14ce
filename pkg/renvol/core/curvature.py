"""
Curvature of cohomogeneity-one metrics.

ProfileDerivatives,
CurvatureFields,
profile_log_derivatives,
log_derivatives,
curvature_of,
laplacian,
ape_residual,
bianchi_residual

The metric is the multiply warped product dr^2 + sum_i phi_i^2 g_i with
phi_i^2 = G_i = F_i / s^2 and dr = sqrt(Ubar) ds / s. Everything is
expressed through the logarithmic derivatives

    lam1_i = s G_i' / G_i,  lam2_i = s^2 G_i'' / G_i,  lam1_U = s Ubar' / Ubar,

which stay bounded at s=0. They are differentiated from F_i (2 - s)^2,
which is smooth on [0, 1] and, in the axis chart, even about the collapse.
The collapsing profile also carries a double zero (1 - s)^2 at s=1, which
is divided out before differencing and restored in closed form.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
from numpy import ndarray

from renvol.core.grid import RadialGrid
from renvol.core.metric import BoundaryRep, CohomOneMetric
from renvol.utils.constants import AXIS_CHART, EINSTEIN_SHIFT
from renvol.utils.errors import DegenerateMetric
from renvol.utils.log import logger
from renvol.utils.math import EVEN, ONESIDED, axis_limit, derivatives


@dataclass(frozen=True, eq=False)
class ProfileDerivatives:
    """Logarithmic derivatives of the profiles, keyed by fiber name."""

    lam1: dict
    lam2: dict
    lam1_u: ndarray


@dataclass(frozen=True, eq=False)
class CurvatureFields:
    """
    Pointwise curvature of a cohomogeneity-one metric.

    Ricci and E are stored as their orthonormal-frame eigenvalues: one
    radial entry and one entry per fiber, each fiber eigenvalue having
    multiplicity equal to the fiber dimension.
    """

    s: ndarray
    dims: dict
    k_radial: dict
    k_self: dict
    k_cross: dict
    ric_r: ndarray
    ric: dict
    sc: ndarray
    e_r: ndarray
    e: dict
    tr_e: ndarray
    e_norm2: ndarray
    rm2: ndarray
    z2: ndarray

    @property
    def scalar_gap(self) -> ndarray:
        """Sc + 12, equal to tr E."""
        return self.sc + 12.0

    @property
    def e_norm(self) -> ndarray:
        """|E|_g."""
        return np.sqrt(np.maximum(self.e_norm2, 0.0))

    def to_dict(self) -> dict:
        """Serializes the fields under plain keys."""
        return {
            'Ric_r': self.ric_r.tolist(),
            'Ric': {k: v.tolist() for k, v in self.ric.items()},
            'Sc': self.sc.tolist(),
            'E_r': self.e_r.tolist(),
            'E': {k: v.tolist() for k, v in self.e.items()},
            'trE': self.tr_e.tolist(),
            'Rm2': self.rm2.tolist(),
            'Z2': self.z2.tolist(),
            'scalarGap': self.scalar_gap.tolist(),
        }


def _to_s(
    grid: RadialGrid, d1: ndarray, d2: ndarray
) -> tuple[ndarray, ndarray]:
    ds = grid.ds
    f_s = d1 / ds
    f_ss = (d2 - grid.d2s * f_s) / ds ** 2
    return f_s, f_ss


def right_parity(metric: CohomOneMetric) -> str:
    """Treatment of the last node for even quantities."""
    return EVEN if metric.chart == AXIS_CHART else ONESIDED


def s_derivatives(
    grid: RadialGrid, values: ndarray, right: str = ONESIDED
) -> tuple[ndarray, ndarray]:
    """First and second derivatives in s of nodal values."""
    d1, d2 = derivatives(values, grid.h, right)
    return _to_s(grid, d1, d2)


def profile_log_derivatives(
    grid: RadialGrid, values: ndarray, right: str, collapsing: bool = False
) -> tuple[ndarray, ndarray]:
    """
    Logarithmic derivatives of G = values / s**2.

    Differentiates log(values * (2 - s)**2), which has no singular factor
    at s=0 or s=1, and converts back in closed form. A collapsing profile
    has its double zero at s=1 divided out first; the last node of the
    quotient is the even extrapolation of its neighbours.

    Parameters
    ----------
    grid : RadialGrid
        Radial grid
    values : ndarray
        A compactified profile F
    right : str
        Parity of F (2 - s)**2 at the last node, 'even' or 'onesided'
    collapsing : bool, optional
        Whether the profile vanishes quadratically at s=1, by default False

    Returns
    -------
    tuple of ndarray
        s G'/G and s**2 G''/G, infinite at a collapse
    """
    s = grid.points
    y = 1.0 - s
    smooth = values * (2.0 - s) ** 2
    with np.errstate(divide='ignore', invalid='ignore'):
        if collapsing:
            smooth = smooth / y ** 2
            smooth[-1] = axis_limit(smooth)
        d1, d2 = s_derivatives(grid, smooth, right)
        l1 = d1 / smooth
        l2 = d2 / smooth - l1 ** 2
        if collapsing:
            l1 = l1 - 2.0 / y
            l2 = l2 - 2.0 / y ** 2
        big_l = l1 + 2.0 / (2.0 - s)
        big_m = l2 + 2.0 / (2.0 - s) ** 2
        lam1 = s * big_l - 2.0
        lam2 = s ** 2 * (big_m + big_l ** 2) - 4.0 * s * big_l + 6.0
    return lam1, lam2


def log_derivatives(metric: CohomOneMetric) -> ProfileDerivatives:
    """
    Logarithmic derivatives of all profiles of a metric.

    Parameters
    ----------
    metric : CohomOneMetric
        The metric

    Returns
    -------
    ProfileDerivatives
        lam1, lam2 per fiber and lam1_u
    """
    right = right_parity(metric)
    axis = metric.chart == AXIS_CHART
    lam1, lam2 = {}, {}
    for name, values in metric.profiles().items():
        lam1[name], lam2[name] = profile_log_derivatives(
            metric.grid, values, right,
            collapsing=axis and name == metric.ansatz.collapsing
        )
    lam1_h, _ = profile_log_derivatives(metric.grid, metric.ubar, right)
    return ProfileDerivatives(lam1=lam1, lam2=lam2, lam1_u=lam1_h + 2.0)


def check_positive(metric: CohomOneMetric):
    """
    Raises DegenerateMetric unless every coefficient is positive inside.

    Parameters
    ----------
    metric : CohomOneMetric
        The metric

    Raises
    ------
    DegenerateMetric
        If a coefficient is non-positive or not finite in the interior
    """
    fields = {'Ubar': metric.ubar, **metric.profiles()}
    for name, values in fields.items():
        inner = values[1:-1]
        if not np.all(np.isfinite(inner)) or np.any(inner <= 0):
            bad = int(np.argmax(~(inner > 0))) + 1
            raise DegenerateMetric(
                f'{name} is not positive at s={metric.s[bad]:.6g}'
            )
    if metric.ubar[0] <= 0 or metric.ubar[-1] <= 0:
        raise DegenerateMetric('Ubar is not positive at an end of the grid')


def _fill_collapse(metric: CohomOneMetric, values: ndarray) -> ndarray:
    # the last node is where a fiber collapses
    values = values.copy()
    if metric.chart == AXIS_CHART:
        values[-1] = axis_limit(values)
    else:
        values[-1] = 4 * values[-2] - 6 * values[-3] + 4 * values[-4] - values[-5]
    return values


def sectional_curvatures(
    metric: CohomOneMetric, derivs: ProfileDerivatives | None = None
) -> tuple[dict, dict, dict]:
    """
    Sectional curvatures of the coordinate planes.

    Parameters
    ----------
    metric : CohomOneMetric
        The metric
    derivs : ProfileDerivatives, optional
        Precomputed logarithmic derivatives, by default None

    Returns
    -------
    tuple of dict
        Radial-fiber curvatures keyed by fiber, curvatures inside each
        fiber keyed by fiber, curvatures between fibers keyed by pairs
    """
    if derivs is None:
        derivs = log_derivatives(metric)
    s = metric.s
    u = metric.ubar
    profiles = metric.profiles()
    lam1_u = derivs.lam1_u

    q, k_radial, k_self = {}, {}, {}
    with np.errstate(divide='ignore', invalid='ignore'):
        for fiber in metric.ansatz.fibers:
            l1 = derivs.lam1[fiber.name]
            l2 = derivs.lam2[fiber.name]
            q[fiber.name] = l1 / (2.0 * np.sqrt(u))
            phi2 = (l1 / 2 + l2 / 2 - l1 ** 2 / 4 - l1 * lam1_u / 4) / u
            k_radial[fiber.name] = -phi2
            k_self[fiber.name] = (
                fiber.kappa * s ** 2 / profiles[fiber.name] - q[fiber.name] ** 2
            )
        k_cross = {
            (i.name, j.name): -q[i.name] * q[j.name]
            for i, j in combinations(metric.ansatz.fibers, 2)
        }

    k_radial = {k: _fill_collapse(metric, v) for k, v in k_radial.items()}
    k_self = {k: _fill_collapse(metric, v) for k, v in k_self.items()}
    k_cross = {k: _fill_collapse(metric, v) for k, v in k_cross.items()}
    return k_radial, k_self, k_cross


def curvature_of(
    metric: CohomOneMetric, derivs: ProfileDerivatives | None = None
) -> CurvatureFields:
    """
    Curvature fields of a metric.

    Parameters
    ----------
    metric : CohomOneMetric
        The metric
    derivs : ProfileDerivatives, optional
        Precomputed logarithmic derivatives, by default None

    Returns
    -------
    CurvatureFields
        Ricci, scalar curvature, E, |Rm|^2 and |Z|^2 per node

    Raises
    ------
    DegenerateMetric
        If a coefficient is not positive in the interior

    Examples
    --------
    >>> from renvol.core.grid import make_grid
    >>> from renvol.core.models import hyperbolic_ball
    >>> from renvol.core.curvature import curvature_of
    >>> fields = curvature_of(hyperbolic_ball(make_grid(129)))
    >>> round(float(fields.sc[64]), 6)
    -12.0
    """
    check_positive(metric)
    k_radial, k_self, k_cross = sectional_curvatures(metric, derivs)
    fibers = metric.ansatz.fibers
    dims = {f.name: f.dim for f in fibers}

    ric_r = sum(dims[name] * k for name, k in k_radial.items())
    ric = {}
    for fiber in fibers:
        value = k_radial[fiber.name] + (fiber.dim - 1) * k_self[fiber.name]
        for (i, j), k in k_cross.items():
            if fiber.name == i:
                value = value + dims[j] * k
            elif fiber.name == j:
                value = value + dims[i] * k
        ric[fiber.name] = value
    sc = ric_r + sum(dims[name] * value for name, value in ric.items())

    rm2 = sum(dims[name] * k ** 2 for name, k in k_radial.items())
    rm2 = rm2 + sum(
        dims[name] * (dims[name] - 1) / 2 * k ** 2 for name, k in k_self.items()
    )
    rm2 = 4.0 * (
        rm2 + sum(dims[i] * dims[j] * k ** 2 for (i, j), k in k_cross.items())
    )

    e_r = ric_r + EINSTEIN_SHIFT
    e = {name: value + EINSTEIN_SHIFT for name, value in ric.items()}
    tr_e = e_r + sum(dims[name] * value for name, value in e.items())
    e_norm2 = e_r ** 2 + sum(dims[name] * value ** 2 for name, value in e.items())
    z2 = e_norm2 - tr_e ** 2 / 4.0

    return CurvatureFields(
        s=metric.s, dims=dims, k_radial=k_radial, k_self=k_self,
        k_cross=k_cross, ric_r=ric_r, ric=ric, sc=sc, e_r=e_r, e=e,
        tr_e=tr_e, e_norm2=e_norm2, rm2=rm2, z2=z2,
    )


def laplacian(
    metric: CohomOneMetric,
    values: ndarray,
    derivs: ProfileDerivatives | None = None
) -> ndarray:
    """
    Scalar Laplacian of a radial function.

    Delta f = [s^2 f'' + (sum_i d_i lam1_i / 2 - lam1_U / 2 + 1) s f'] / Ubar

    and, in the axis chart, (1 + d) f'' / Ubar on the axis, d the dimension
    of the collapsing fiber.

    Parameters
    ----------
    metric : CohomOneMetric
        The metric
    values : ndarray
        Function values at the nodes, smooth across the collapse
    derivs : ProfileDerivatives, optional
        Precomputed logarithmic derivatives, by default None

    Returns
    -------
    ndarray
        Laplacian at the nodes
    """
    if derivs is None:
        derivs = log_derivatives(metric)
    s = metric.s
    f_s, f_ss = s_derivatives(metric.grid, values, right_parity(metric))
    mean = sum(f.dim * derivs.lam1[f.name] for f in metric.ansatz.fibers)
    with np.errstate(divide='ignore', invalid='ignore'):
        result = (
            s ** 2 * f_ss + (mean / 2 - derivs.lam1_u / 2 + 1.0) * s * f_s
        ) / metric.ubar
    if metric.chart != AXIS_CHART:
        return _fill_collapse(metric, result)
    # f_r vanishes on the axis, so Delta f = (1 + d) f_rr there
    dims = {f.name: f.dim for f in metric.ansatz.fibers}
    result[-1] = (1.0 + dims[metric.ansatz.collapsing]) * f_ss[-1] / metric.ubar[-1]
    return result


def ape_residual(
    metric: CohomOneMetric,
    rep: BoundaryRep | None = None,
    fields: CurvatureFields | None = None
) -> float:
    """
    Sup over the interior of x^-4 |E|_g.

    Parameters
    ----------
    metric : CohomOneMetric
        The metric
    rep : BoundaryRep, optional
        Boundary representative fixing x, by default metric.default_rep()
    fields : CurvatureFields, optional
        Precomputed curvature, by default None

    Returns
    -------
    float
        The weighted sup norm, small iff the metric is numerically APE

    Raises
    ------
    NonAHMetric
        If the special boundary defining function does not exist
    """
    from renvol.core.bdf import special_bdf

    bdf = special_bdf(metric, rep)
    if fields is None:
        fields = curvature_of(metric)
    inner = slice(1, -1)
    residual = float(np.max(fields.e_norm[inner] / bdf.x[inner] ** 4))
    logger.debug(f'...APE residual {residual:.3e}')
    return residual


def bianchi_residual(
    metric: CohomOneMetric, fields: CurvatureFields | None = None
) -> float:
    """
    Sup norm of div Rc - d Sc / 2.

    For the diagonal ansatz only the radial component survives:
    D Ric_r + sum_i d_i q_i (Ric_r - Ric_i) - D Sc / 2, with
    D = (s / sqrt(Ubar)) d/ds and q_i = D log phi_i.

    Parameters
    ----------
    metric : CohomOneMetric
        The metric
    fields : CurvatureFields, optional
        Precomputed curvature, by default None

    Returns
    -------
    float
        Residual, excluding the two nodes at each end

    Raises
    ------
    DegenerateMetric
        If a coefficient is not positive in the interior
    """
    derivs = log_derivatives(metric)
    if fields is None:
        fields = curvature_of(metric, derivs)
    s = metric.s
    root_u = np.sqrt(metric.ubar)
    right = right_parity(metric)
    ric_s, _ = s_derivatives(metric.grid, fields.ric_r, right)
    sc_s, _ = s_derivatives(metric.grid, fields.sc, right)

    with np.errstate(divide='ignore', invalid='ignore'):
        value = s / root_u * (ric_s - sc_s / 2)
        for fiber in metric.ansatz.fibers:
            q = derivs.lam1[fiber.name] / (2 * root_u)
            value = value + fiber.dim * q * (fields.ric_r - fields.ric[fiber.name])
    return float(np.max(np.abs(value[2:-2])))
