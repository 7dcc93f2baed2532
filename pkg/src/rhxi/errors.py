"""Exception hierarchy.

Every numeric failure raised by this package derives from :class:`RhxiError`
so callers (the command line in particular) can map them onto exit codes.
Precondition violations additionally derive from :class:`ValueError`.
"""


class RhxiError(Exception):
    """Base class for all package errors."""


class PreconditionError(RhxiError, ValueError):
    """An argument is outside the documented domain of an operation."""


class PrecisionError(PreconditionError):
    """The requested tolerance cannot be met at the working precision."""


class PoleError(RhxiError, ZeroDivisionError):
    """Evaluation point coincides with a pole (Gamma at 0, -1, ..., zeta at 1)."""


class NearZeroDivisor(RhxiError, ZeroDivisionError):
    """The denominator xi(s) of the ratio is numerically zero."""

    def __init__(self, message, s=None, distance=None):
        super().__init__(message)
        self.s = s
        self.distance = distance


class NearPoleOnContour(RhxiError):
    """An integration line passes too close to a zero of xi."""


class MaxPanelsExceeded(RhxiError):
    """Adaptive quadrature did not converge within the panel budget."""


class NonFiniteIntegrand(RhxiError):
    """The integrand failed or returned a non-finite value."""


class CalibrationError(RhxiError):
    """Sampled data exceeds the calibrated decay model."""


class NoSignChange(PreconditionError):
    """A root bracket does not enclose a sign change."""


class CircleContainsMultipleZeros(RhxiError):
    """Winding number around a residue circle is not exactly one."""


class DomainError(PreconditionError):
    """Injected pole location lies outside the open strip."""


class StepTooCoarse(UserWarning):
    """The zero scan step may be too coarse to separate neighbouring zeros."""
