"""renvol constants."""

from math import pi

DIMENSION = 4
EINSTEIN_SHIFT = DIMENSION - 1
HYPERBOLIC_RM2 = 2 * DIMENSION * (DIMENSION - 1)
SCALAR_GAP_SHIFT = DIMENSION * (DIMENSION - 1)

MIN_GRID_POINTS = 16

UNIFORM = 'uniform'
TANH = 'tanh'
CLUSTERINGS = [UNIFORM, TANH]
DEFAULT_STRETCH = 2.0

CIRCLE_COLLAPSE = 'circle_collapse'
SPHERE_COLLAPSE = 'sphere_collapse'
POINT_COLLAPSE = 'point_collapse'
VARIANTS = [CIRCLE_COLLAPSE, SPHERE_COLLAPSE, POINT_COLLAPSE]
EULER_CHAR = {CIRCLE_COLLAPSE: 2, SPHERE_COLLAPSE: 0, POINT_COLLAPSE: 1}

AXIS_CHART = 'axis'
NORMAL_CHART = 'normal'
CHARTS = [AXIS_CHART, NORMAL_CHART]

CIRCLE = 'circle'
SPHERE = 'sphere'

S2_X_S1 = 'S2xS1'
S3 = 'S3'

UBAR = 'Ubar'
VBAR = 'Vbar'
WBAR = 'Wbar'

UNIT_S2_AREA = 4 * pi
UNIT_S3_VOLUME = 2 * pi ** 2
GAUSS_BONNET = 4 * pi ** 2 / 3

ADS_SCHWARZSCHILD = 'ads_schwarzschild'
THERMAL_HYPERBOLIC = 'thermal_hyperbolic'
HYPERBOLIC_BALL = 'hyperbolic_ball'
SNAPSHOT = 'snapshot'
METRIC_KINDS = [ADS_SCHWARZSCHILD, THERMAL_HYPERBOLIC, HYPERBOLIC_BALL, SNAPSHOT]

SMALL = 'small'
LARGE = 'large'
THERMAL = 'thermal'

BETA = 'beta'
A_SMALL = 'a_small'
A_LARGE = 'a_large'
M_SMALL = 'm_small'
M_LARGE = 'm_large'
S_SMALL = 'S_small'
S_LARGE = 'S_large'
RENV_SMALL = 'renv_small'
RENV_LARGE = 'renv_large'
RENV_THERMAL = 'renv_thermal'
MINIMIZER = 'minimizer'
ORDERED = 'ordered'
TRANSITION = 'transition'
PHASE_COLUMNS = [
    BETA, A_SMALL, A_LARGE, M_SMALL, M_LARGE, S_SMALL, S_LARGE,
    RENV_SMALL, RENV_LARGE, RENV_THERMAL, MINIMIZER
]
PHASE_UNITS = {
    BETA: 'length', A_SMALL: 'length', A_LARGE: 'length',
    M_SMALL: 'length', M_LARGE: 'length', S_SMALL: 'length^2',
    S_LARGE: 'length^2', RENV_SMALL: 'length^4', RENV_LARGE: 'length^4',
    RENV_THERMAL: 'length^4', MINIMIZER: 'label', ORDERED: 'flag',
    TRANSITION: 'flag',
}

TIME = 't'
RENV_HADAMARD = 'renv_hadamard'
RENV_RIESZ = 'renv_riesz'
RENV_ANDERSON = 'renv_anderson'
DE_INTEGRAL = 'dE_integral'
MIN_SCALAR_GAP = 'min_scalar_gap'
SUP_APE_DECAY = 'sup_ape_decay'
TRE_RESIDUAL = 'trE_residual'
DETURCK_NORM = 'deturck_norm'
BDF_DRIFT_SLOPE = 'bdf_drift_slope'
SECOND_VARIATION_RHS = 'second_variation_rhs'
Z_INTEGRAL = 'z_integral'
V2_FIT = 'v2_fit'
TRACE_COLUMNS = [
    TIME, RENV_HADAMARD, RENV_RIESZ, RENV_ANDERSON, DE_INTEGRAL,
    MIN_SCALAR_GAP, SUP_APE_DECAY, TRE_RESIDUAL, DETURCK_NORM, BDF_DRIFT_SLOPE
]
TRACE_EXTRA_COLUMNS = [SECOND_VARIATION_RHS, Z_INTEGRAL, V2_FIT]
TRACE_UNITS = {
    TIME: 'length^2', RENV_HADAMARD: 'length^4', RENV_RIESZ: 'length^4',
    RENV_ANDERSON: 'length^4', DE_INTEGRAL: 'length^2',
    MIN_SCALAR_GAP: 'length^-2', SUP_APE_DECAY: 'length^-6',
    TRE_RESIDUAL: 'length^-4', DETURCK_NORM: 'length^-1',
    BDF_DRIFT_SLOPE: '1', SECOND_VARIATION_RHS: '1', Z_INTEGRAL: '1',
    V2_FIT: '1',
}

CONFORMAL = 'conformal'
BUMP = 'bump'
TAIL = 'tail'
PERTURBATIONS = [CONFORMAL, BUMP, TAIL]

BH = 'bh'
RENVOL = 'renvol'
FG = 'fg'
FLOW = 'flow'
SWEEP = 'sweep'
SUBCOMMANDS = [BH, RENVOL, FG, FLOW, SWEEP]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
