"""
AdS-Schwarzschild thermodynamics.

BHState,
horizon_radii,
renv_closed_form,
free_energy_check,
bh_state,
phase_table,
hawking_page_transition

"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from math import pi, sqrt

import numpy as np
from pandas import DataFrame
from scipy.optimize import brentq

from renvol.core.models import ads_beta, ads_mass
from renvol.utils.constants import (
    A_LARGE,
    A_SMALL,
    BETA,
    LARGE,
    M_LARGE,
    M_SMALL,
    MINIMIZER,
    ORDERED,
    PHASE_COLUMNS,
    RENV_LARGE,
    RENV_SMALL,
    RENV_THERMAL,
    S_LARGE,
    S_SMALL,
    SMALL,
    THERMAL,
    TRANSITION,
)
from renvol.utils.errors import DegenerateRoot, NoBlackHole
from renvol.utils.log import logger, progress_bar, timer_decorator

DEGENERACY_TOLERANCE = 1e-12
BRANCHES = [SMALL, LARGE]


@dataclass(frozen=True)
class BHState:
    """
    One black hole at inverse temperature beta.

    free_energy_scaled is (3 / (8 pi beta)) RenV and free_energy is
    <E> - S / beta; the two agree identically in a.
    """

    beta: float
    a: float
    branch: str
    m: float
    entropy: float
    renv: float
    free_energy_scaled: float
    internal_energy: float

    @property
    def free_energy(self) -> float:
        """<E> - S / beta."""
        return self.internal_energy - self.entropy / self.beta

    def to_dict(self) -> dict:
        """Returns the state in a dict format."""
        return {**asdict(self), 'free_energy': self.free_energy}


def horizon_radii(beta: float) -> tuple[float, float]:
    """
    Horizon radii of the black holes with smooth circle period beta.

    Roots of 3 a^2 - (4 pi / beta) a + 1 = 0. The larger root comes from
    the quadratic formula and the smaller from the product of the roots,
    which avoids cancellation as beta goes to zero.

    Parameters
    ----------
    beta : float
        Circle period, positive

    Returns
    -------
    tuple of float
        a_small and a_large

    Raises
    ------
    NoBlackHole
        If beta > 2 pi / sqrt(3)
    DegenerateRoot
        If beta = 2 pi / sqrt(3) up to rounding, with the root in .a

    Examples
    --------
    >>> from math import pi
    >>> from renvol.thermo.black_hole import horizon_radii
    >>> horizon_radii(pi)
    (0.3333333333333333, 1.0)
    """
    if not beta > 0:
        raise ValueError(f'beta must be positive, got {beta}')
    b = 4 * pi / beta
    disc = b * b - 12.0
    if abs(disc) <= DEGENERACY_TOLERANCE * b * b:
        raise DegenerateRoot(b / 6, f'double horizon root at beta={beta}')
    if disc < 0:
        raise NoBlackHole(
            f'no black hole at beta={beta}, it must be below 2 pi / sqrt(3)'
        )
    a_large = (b + sqrt(disc)) / 6
    return 1.0 / (3.0 * a_large), a_large


def renv_closed_form(a: float) -> float:
    """
    Renormalized volume of the black hole with horizon radius a.

    Parameters
    ----------
    a : float
        Horizon radius, positive

    Returns
    -------
    float
        (8 pi^2 / 3) a^2 (1 - a^2) / (1 + 3 a^2)

    Examples
    --------
    >>> from renvol.thermo.black_hole import renv_closed_form
    >>> renv_closed_form(1.0)
    0.0
    """
    if not a > 0:
        raise ValueError(f'horizon radius must be positive, got {a}')
    return 8 * pi ** 2 / 3 * a ** 2 * (1 - a ** 2) / (1 + 3 * a ** 2)


def _state(beta: float, a: float, branch: str) -> BHState:
    m = ads_mass(a)
    entropy = pi * a ** 2
    renv = renv_closed_form(a)
    return BHState(
        beta=beta, a=a, branch=branch, m=m, entropy=entropy, renv=renv,
        free_energy_scaled=3 / (8 * pi * beta) * renv, internal_energy=m,
    )


def free_energy_check(a: float) -> float:
    """
    Relative residual of (3 / (8 pi beta)) RenV = <E> - S / beta.

    beta is the smooth period of the black hole of radius a and both
    sides equal (a - a^3) / 4. The residual is scaled by
    max(|<E>|, S / beta), the size of the terms that cancel.

    Parameters
    ----------
    a : float
        Horizon radius, positive

    Returns
    -------
    float
        |LHS - RHS| / max(|<E>|, S / beta)
    """
    state = _state(ads_beta(a), a, LARGE if a >= 1 / sqrt(3) else SMALL)
    scale = max(abs(state.internal_energy), state.entropy / state.beta)
    return abs(state.free_energy_scaled - state.free_energy) / scale


def bh_state(beta: float, branch: str = LARGE) -> BHState:
    """
    Black hole state on one branch.

    Parameters
    ----------
    beta : float
        Circle period
    branch : str, optional
        'small' or 'large', by default 'large'

    Returns
    -------
    BHState
        Radius, mass, entropy, renormalized volume and free energies

    Raises
    ------
    NoBlackHole
        If beta is above the existence window
    DegenerateRoot
        At the edge of the existence window
    """
    if branch not in BRANCHES:
        raise ValueError(f'branch must be one of {BRANCHES}, got {branch}')
    a_small, a_large = horizon_radii(beta)
    return _state(beta, a_small if branch == SMALL else a_large, branch)


@timer_decorator
def phase_table(beta_min: float, beta_max: float, steps: int) -> DataFrame:
    """
    Hawking-Page phase table.

    One row per beta with both black holes and thermal hyperbolic
    space, whose renormalized volume is zero. The minimizer is the large
    black hole where its volume is negative, thermal hyperbolic space
    otherwise. 'ordered' flags RenV(large) < 0 < RenV(small) and
    'transition' the two rows bracketing a change of minimizer.

    Parameters
    ----------
    beta_min : float
        Smallest beta
    beta_max : float
        Largest beta, below 2 pi / sqrt(3)
    steps : int
        Number of rows

    Returns
    -------
    DataFrame
        Columns of PHASE_COLUMNS followed by 'ordered' and 'transition'

    Raises
    ------
    ValueError
        If the range is empty
    NoBlackHole
        If beta_max is above the existence window

    Examples
    --------
    >>> from renvol.thermo.black_hole import phase_table
    >>> phase_table(1.0, 3.5, 6)[['beta', 'minimizer']]
       beta minimizer
    0   1.0     large
    1   1.5     large
    2   2.0     large
    3   2.5     large
    4   3.0     large
    5   3.5   thermal
    """
    if steps < 1 or not 0 < beta_min <= beta_max or (steps > 1 and beta_min == beta_max):
        raise ValueError(
            f'empty beta range [{beta_min}, {beta_max}] with {steps} steps'
        )
    logger.debug(f'...phase table on [{beta_min}, {beta_max}] with {steps} rows')
    rows = []
    for beta in progress_bar(np.linspace(beta_min, beta_max, steps), desc='Phase table'):
        small = bh_state(float(beta), SMALL)
        large = bh_state(float(beta), LARGE)
        rows.append({
            BETA: float(beta),
            A_SMALL: small.a,
            A_LARGE: large.a,
            M_SMALL: small.m,
            M_LARGE: large.m,
            S_SMALL: small.entropy,
            S_LARGE: large.entropy,
            RENV_SMALL: small.renv,
            RENV_LARGE: large.renv,
            RENV_THERMAL: 0.0,
            MINIMIZER: LARGE if large.renv < 0 else THERMAL,
            ORDERED: bool(large.renv < 0 < small.renv),
        })
    table = DataFrame(rows, columns=PHASE_COLUMNS + [ORDERED])
    change = (table[MINIMIZER] != table[MINIMIZER].shift()).to_numpy()
    change[0] = False
    table[TRANSITION] = change | np.roll(change, -1)
    return table


def hawking_page_transition(beta_lo: float = 1.0, beta_hi: float = 3.5) -> float:
    """
    Beta where RenV of the large black hole changes sign.

    Parameters
    ----------
    beta_lo : float, optional
        Lower end of the bracket, by default 1.0
    beta_hi : float, optional
        Upper end of the bracket, by default 3.5

    Returns
    -------
    float
        The transition beta, pi up to the root finder tolerance

    Raises
    ------
    ValueError
        If the bracket does not contain a sign change

    Examples
    --------
    >>> from renvol.thermo.black_hole import hawking_page_transition
    >>> round(hawking_page_transition(), 9)
    3.141592654
    """
    def _renv_large(beta: float) -> float:
        return bh_state(beta, LARGE).renv

    return float(brentq(_renv_large, beta_lo, beta_hi, xtol=1e-13, rtol=1e-15))
