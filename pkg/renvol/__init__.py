"""
renvol.

Renormalized volume, Fefferman-Graham expansions and the normalized
Ricci-DeTurck flow of cohomogeneity one asymptotically hyperbolic
4-manifolds

"""

from .core import bdf, curvature, grid, metric, models
from .core.curvature import curvature_of
from .core.grid import RadialGrid, make_grid
from .core.metric import CohomOneMetric, read_metric_json, save_metric_json
from .expansion import fefferman_graham
from .flow import diagnostics, perturbation, ricci_deturck
from .thermo import black_hole
from .utils import constants, errors, integration, log, math, mem, tables
from .volume import renormalized
from .volume.renormalized import reconcile

__version__ = '1.0.0'
