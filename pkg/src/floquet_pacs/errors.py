"""Exception types raised across the package."""


class FloquetPacsError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(FloquetPacsError, ValueError):
    """Invalid periodic configuration (shapes, symmetry, period)."""


class IntegrationError(FloquetPacsError, ArithmeticError):
    """Non-finite values appeared while integrating the fundamental matrix."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class UnstableError(FloquetPacsError):
    """Some Floquet multiplier lies off the unit circle."""

    def __init__(self, message, margin=None):
        super().__init__(message)
        self.margin = margin


class DegenerateError(FloquetPacsError):
    """Zero Floquet exponent or defective (non-diagonalizable) monodromy."""


class NormalizationSingularError(FloquetPacsError):
    """A Floquet mode has vanishing symplectic (Krein) norm."""


class ImaginaryResidueError(FloquetPacsError):
    """A quantity that must be real carries a significant imaginary part."""


class NonConvergedError(FloquetPacsError):
    """A series did not converge within its term budget."""


class GridTooLargeError(FloquetPacsError, ValueError):
    """Requested grid exceeds the point budget."""


class TruncationWarning(UserWarning):
    """Truncated Fock space leaks population into the top shell."""
