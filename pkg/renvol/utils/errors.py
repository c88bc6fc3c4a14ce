"""
Exceptions raised by renvol.

Input problems also derive from ValueError and numerical failures from
ArithmeticError, so callers may catch either the named class or the builtin.

"""
from __future__ import annotations


class RenvolError(Exception):
    """Base class of every renvol failure."""


class NumericalError(RenvolError, ArithmeticError):
    """A computation could not reach the requested accuracy."""


class TooCoarse(RenvolError, ValueError):
    """Grid has fewer points than the stencils need."""


class NonAHMetric(RenvolError, ValueError):
    """The metric is not asymptotically hyperbolic at s=0."""


class DegenerateMetric(RenvolError, ValueError):
    """A metric coefficient is not positive in the interior."""


class NotNormalized(RenvolError, ValueError):
    """The metric is not in Graham-Lee normal form."""


class UnsupportedBoundary(RenvolError, ValueError):
    """The boundary representative is not a supported product."""


class NonAPEPerturbation(RenvolError, ValueError):
    """A perturbation profile would break |E| = O(x^4)."""


class InsufficientSnapshots(RenvolError, ValueError):
    """A trace has too few snapshots for a finite difference in time."""


class SchemaError(RenvolError, ValueError):
    """A configuration entry is invalid."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f'{path}: {message}')


class NoBlackHole(RenvolError, ValueError):
    """The horizon quadratic has no real roots at this beta."""


class DegenerateRoot(RenvolError, ValueError):
    """The horizon quadratic has a double root."""

    def __init__(self, a: float, message: str):
        self.a = a
        super().__init__(message)


class IllConditionedFit(NumericalError):
    """Least squares system condition number is above threshold."""


class FitUnstable(NumericalError):
    """Extrapolations over subsets of samples disagree."""


class DivergentIntegral(NumericalError):
    """An integrand does not decay fast enough near the boundary."""


class CFLViolation(NumericalError):
    """Time step is above the explicit stability bound."""


class BlowupDetected(NumericalError):
    """Curvature exceeded the blowup threshold."""


class PositivityLost(NumericalError):
    """A metric coefficient became non-positive during the flow."""


class RejectionExhausted(NumericalError):
    """No admissible perturbation was found within the sampling budget."""
