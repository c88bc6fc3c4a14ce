"""
Perturbations of initial data.

PerturbationSpec,
bump_profile,
perturb,
sample_perturbation

"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy import ndarray

from renvol.core.bdf import special_bdf
from renvol.core.curvature import check_positive, curvature_of
from renvol.core.metric import CohomOneMetric
from renvol.utils.constants import BUMP, CONFORMAL, PERTURBATIONS, TAIL, UBAR
from renvol.utils.errors import NonAPEPerturbation, RejectionExhausted
from renvol.utils.log import logger

APE_ORDER = 4
COMPONENTS = [UBAR, 'V', 'W']


@dataclass(frozen=True)
class PerturbationSpec:
    """
    A perturbation profile.

    'conformal' multiplies the metric by exp(2u) with
    u = amplitude (sech^4(rho - center) + sech^4(rho + center)) / 2 and
    rho = -log(x / x_max), which decays like x^4 at the boundary.
    'bump' multiplies the components by 1 + amplitude chi, chi a smooth
    bump of half width `width` around s = center.
    'tail' multiplies them by 1 + amplitude s^order chi, chi a smooth
    cutoff equal to one near s=0 and vanishing beyond s = width.
    """

    kind: str
    amplitude: float
    center: float = 0.0
    width: float = 0.2
    order: int = APE_ORDER
    components: tuple = ('W',)

    def __post_init__(self):
        """Validates the profile."""
        if self.kind not in PERTURBATIONS:
            raise ValueError(f'kind must be one of {PERTURBATIONS}, got {self.kind}')
        if not self.width > 0:
            raise ValueError(f'width must be positive, got {self.width}')
        for name in self.components:
            if name not in COMPONENTS:
                raise ValueError(f'unknown component {name}, use one of {COMPONENTS}')
        lo, hi = self.center - self.width, self.center + self.width
        if self.kind == BUMP and not 0 < lo < hi < 1:
            raise ValueError(f'bump support [{lo}, {hi}] must lie inside (0, 1)')
        if self.kind == TAIL and self.width >= 1:
            raise ValueError(f'tail cutoff must be below the collapse, got {self.width}')
        if self.kind == CONFORMAL and self.center < 0:
            raise ValueError(f'center must be non negative, got {self.center}')
        if self.kind == TAIL and self.order < 1:
            raise ValueError(f'order must be positive, got {self.order}')

    def to_dict(self) -> dict:
        """Returns the profile in a dict format."""
        return {
            'kind': self.kind,
            'amplitude': self.amplitude,
            'center': self.center,
            'width': self.width,
            'order': self.order,
            'components': list(self.components),
        }


def bump_profile(s: ndarray, center: float, width: float) -> ndarray:
    """
    Smooth compactly supported bump with peak value one.

    Parameters
    ----------
    s : ndarray
        Nodes
    center : float
        Center of the support
    width : float
        Half width of the support

    Returns
    -------
    ndarray
        exp(1 - 1 / (1 - r^2)) for |r| < 1, r = (s - center) / width, else 0
    """
    r = (np.asarray(s, dtype=float) - center) / width
    inside = np.abs(r) < 1
    out = np.zeros_like(r)
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - r[inside] ** 2))
    return out


def _cutoff(s: ndarray, width: float) -> ndarray:
    """Smooth step, one for s <= width / 2 and zero for s >= width."""
    t = np.clip(2 * np.asarray(s) / width - 1.0, 0.0, 1.0)
    with np.errstate(divide='ignore', over='ignore'):
        left = np.where(t < 1, np.exp(-1.0 / (1.0 - t)), 0.0)
        right = np.where(t > 0, np.exp(-1.0 / t), 0.0)
    return left / (left + right)


def _conformal_factor(metric: CohomOneMetric, spec: PerturbationSpec) -> ndarray:
    bdf = special_bdf(metric)
    with np.errstate(divide='ignore'):
        rho = -np.log(bdf.x / bdf.x_max)
    u = spec.amplitude / 2 * (
        1.0 / np.cosh(rho - spec.center) ** 4 + 1.0 / np.cosh(rho + spec.center) ** 4
    )
    u[0] = 0.0
    return np.exp(2 * u)


def perturb(
    metric: CohomOneMetric, spec: PerturbationSpec, require_ape: bool = True
) -> CohomOneMetric:
    """
    Applies a perturbation profile to a metric.

    Parameters
    ----------
    metric : CohomOneMetric
        Axis chart metric
    spec : PerturbationSpec
        The profile
    require_ape : bool, optional
        Reject tail profiles that break |E| = O(x^4), by default True

    Returns
    -------
    CohomOneMetric
        The perturbed metric, the same object when the amplitude is zero

    Raises
    ------
    NonAPEPerturbation
        If require_ape and a tail profile has order below 4
    DegenerateMetric
        If the perturbed coefficients are not positive
    """
    if spec.kind == TAIL and require_ape and spec.order < APE_ORDER:
        raise NonAPEPerturbation(
            f'a tail of order {spec.order} changes E at order below x^{APE_ORDER}'
        )
    if spec.amplitude == 0:
        return metric
    s = metric.s
    state = {UBAR: np.array(metric.ubar)}
    state.update({k: np.array(v) for k, v in metric.profiles().items()})

    if spec.kind == CONFORMAL:
        factor = _conformal_factor(metric, spec)
        state = {k: v * factor for k, v in state.items()}
    else:
        if spec.kind == BUMP:
            shape = bump_profile(s, spec.center, spec.width)
        else:
            shape = s ** spec.order * _cutoff(s, spec.width)
        for name in spec.components:
            if name not in state:
                raise ValueError(f'{metric!r} has no component {name}')
            state[name] = state[name] * (1.0 + spec.amplitude * shape)

    ubar = state.pop(UBAR)
    result = metric.with_profiles(ubar, state)
    check_positive(result)
    logger.debug(f'...perturbed {metric!r} by {spec}')
    return result


def sample_perturbation(
    metric: CohomOneMetric,
    kind: str = CONFORMAL,
    budget: int = 50,
    seed: int | None = None,
    amplitude_range: tuple[float, float] = (0.05, 0.5),
    center_range: tuple[float, float] = (0.0, 1.5),
    gap_tol: float | None = None,
    require_ape: bool = True,
) -> tuple[CohomOneMetric, PerturbationSpec]:
    """
    Rejection sampling of perturbations with non negative scalar gap.

    Parameters
    ----------
    metric : CohomOneMetric
        Axis chart metric
    kind : str, optional
        Profile kind, by default 'conformal'
    budget : int, optional
        Number of candidates, by default 50
    seed : int, optional
        Seed of the random generator, by default None
    amplitude_range : tuple of float, optional
        Range of amplitudes, by default (0.05, 0.5)
    center_range : tuple of float, optional
        Range of centers, by default (0.0, 1.5); for bumps the center is
        drawn inside the admissible interval instead
    gap_tol : float, optional
        Accepted negative part of Sc + 12, by default grid.tolerance()
    require_ape : bool, optional
        Passed to perturb, by default True

    Returns
    -------
    tuple
        The perturbed metric and its profile

    Raises
    ------
    RejectionExhausted
        If no candidate has min(Sc + 12) >= -gap_tol
    """
    rng = np.random.default_rng(seed)
    if gap_tol is None:
        gap_tol = metric.grid.tolerance()
    for attempt in range(budget):
        amplitude = float(rng.uniform(*amplitude_range))
        if kind == BUMP:
            width = float(rng.uniform(0.05, 0.25))
            center = float(rng.uniform(width + 0.05, 0.95 - width))
            spec = PerturbationSpec(kind, amplitude, center, width)
        else:
            spec = PerturbationSpec(kind, amplitude, float(rng.uniform(*center_range)))
        candidate = perturb(metric, spec, require_ape)
        gap = float(np.min(curvature_of(candidate).scalar_gap))
        if gap >= -gap_tol:
            logger.debug(f'...accepted {spec} after {attempt + 1} draws, gap={gap:.3e}')
            return candidate, spec
    raise RejectionExhausted(
        f'no {kind} perturbation with non negative scalar gap in {budget} draws'
    )
