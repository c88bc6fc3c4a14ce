"""RadialGrid class."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numpy import ndarray

from renvol.utils.constants import (
    CLUSTERINGS,
    DEFAULT_STRETCH,
    MIN_GRID_POINTS,
    UNIFORM,
)
from renvol.utils.errors import TooCoarse
from renvol.utils.log import logger


@dataclass(frozen=True)
class RadialGrid:
    """
    Discretization of the compactified radial coordinate s in [0, 1].

    s=0 is conformal infinity and s=1 the collapse locus. Nodes are the
    image of a uniform computational coordinate sigma under a smooth
    increasing map; for 'tanh' clustering the map is odd about sigma=1,
    so reflections across the last node are reflections in s as well.
    """

    n: int
    clustering: str = UNIFORM
    stretch: float = DEFAULT_STRETCH

    def __post_init__(self):
        """Validates the grid parameters."""
        if self.n < MIN_GRID_POINTS:
            raise TooCoarse(
                f'grid needs at least {MIN_GRID_POINTS} points, got {self.n}'
            )
        if self.clustering not in CLUSTERINGS:
            raise ValueError(
                f'clustering must be one of {CLUSTERINGS}, got {self.clustering}'
            )
        if self.stretch <= 0:
            raise ValueError(f'stretch must be positive, got {self.stretch}')

    @property
    def h(self) -> float:
        """Spacing of the computational coordinate."""
        return 1.0 / (self.n - 1)

    @cached_property
    def sigma(self) -> ndarray:
        """Uniform computational nodes."""
        return np.linspace(0.0, 1.0, self.n)

    @cached_property
    def points(self) -> ndarray:
        """Nodes in s, s[0]=0 and s[-1]=1."""
        points = self.s_of_sigma(self.sigma)
        points[0], points[-1] = 0.0, 1.0
        return points

    @cached_property
    def ds(self) -> ndarray:
        """ds/dsigma at the nodes."""
        return self.ds_dsigma(self.sigma)

    @cached_property
    def d2s(self) -> ndarray:
        """d2s/dsigma2 at the nodes."""
        return self.d2s_dsigma2(self.sigma)

    def s_of_sigma(self, sigma: ndarray | float) -> ndarray:
        """Maps computational coordinates to s, also beyond sigma=1."""
        sigma = np.asarray(sigma, dtype=float)
        if self.clustering == UNIFORM:
            return sigma.copy()
        c = self.stretch
        return 1.0 - np.tanh(c * (1.0 - sigma)) / np.tanh(c)

    def ds_dsigma(self, sigma: ndarray | float) -> ndarray:
        """First derivative of the clustering map."""
        sigma = np.asarray(sigma, dtype=float)
        if self.clustering == UNIFORM:
            return np.ones_like(sigma)
        c = self.stretch
        return c / np.cosh(c * (1.0 - sigma)) ** 2 / np.tanh(c)

    def d2s_dsigma2(self, sigma: ndarray | float) -> ndarray:
        """Second derivative of the clustering map."""
        sigma = np.asarray(sigma, dtype=float)
        if self.clustering == UNIFORM:
            return np.zeros_like(sigma)
        c = self.stretch
        u = c * (1.0 - sigma)
        return 2 * c ** 2 * np.tanh(u) / np.cosh(u) ** 2 / np.tanh(c)

    def sigma_of_s(self, s: ndarray | float) -> ndarray:
        """Inverse of the clustering map."""
        s = np.asarray(s, dtype=float)
        if self.clustering == UNIFORM:
            return s.copy()
        c = self.stretch
        return 1.0 - np.arctanh((1.0 - s) * np.tanh(c)) / c

    def tolerance(self, constant: float = 10.0) -> float:
        """Default discretization tolerance C*h**2."""
        return constant * self.h ** 2

    def to_dict(self) -> dict:
        """
        Returns the grid in a dict format.

        Returns
        -------
        dict
            'N': number of nodes,
            'clustering': clustering map name,
            'stretch': clustering strength
        """
        return {'N': self.n, 'clustering': self.clustering, 'stretch': self.stretch}

    @classmethod
    def from_dict(cls, data: dict) -> 'RadialGrid':
        """Builds a grid from the output of to_dict."""
        return cls(
            n=int(data['N']),
            clustering=data.get('clustering', UNIFORM),
            stretch=float(data.get('stretch', DEFAULT_STRETCH)),
        )

    def __repr__(self) -> str:
        """
        String representation of grid.

        Returns
        -------
        str
            N: number of nodes
            clustering: clustering map
            stretch: clustering strength
        """
        text = [f'{k}: {v}' for k, v in self.to_dict().items()]
        return '\n'.join(text)


def make_grid(
    n: int, clustering: str = UNIFORM, stretch: float = DEFAULT_STRETCH
) -> RadialGrid:
    """
    Creates a radial grid.

    Parameters
    ----------
    n : int
        Number of nodes, at least 16
    clustering : str, optional
        'uniform' or 'tanh' (points concentrated near s=0),
        by default 'uniform'
    stretch : float, optional
        Strength of the tanh clustering, by default 2.0

    Returns
    -------
    RadialGrid
        The grid

    Raises
    ------
    TooCoarse
        If n is below 16

    Examples
    --------
    >>> from renvol.core.grid import make_grid
    >>> make_grid(17).points[:3]
    array([0.    , 0.0625, 0.125 ])
    """
    logger.debug(f'...creating {clustering} grid with {n} points')
    return RadialGrid(n=n, clustering=clustering, stretch=stretch)

