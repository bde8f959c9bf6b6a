"""Exception and warning types raised across the package."""


class OptoSqueezeError(Exception):
    """Base class for all package errors."""


class ValidationError(OptoSqueezeError, ValueError):
    """A physical or configuration value violates an invariant."""


class ParseError(OptoSqueezeError, ValueError):
    """Configuration text could not be parsed.

    Args:
        message (str): description of the problem
        line (int): 1-based line number, if known
        col (int): 1-based column number, if known
    """

    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"line {line}, column {col}: {message}"
        super().__init__(message)


class DegenerateCoupling(OptoSqueezeError, ArithmeticError):
    """The dissipative coupling denominator vanishes."""


class RegimeError(OptoSqueezeError):
    """The requested operation is undefined outside the bound-oscillator regime."""


class ImpureState(OptoSqueezeError):
    """A covariance matrix does not describe a pure Gaussian state."""


class ConvergenceError(OptoSqueezeError, ArithmeticError):
    """An eigendecomposition failed its residual check."""


class NotConverged(OptoSqueezeError):
    """A Fock-space truncation sweep did not reach its tolerance."""


class ToyScaleError(OptoSqueezeError):
    """Parameters are too large for a truncated number basis."""


class StepSizeError(OptoSqueezeError, ValueError):
    """Integrator step is too coarse for the dynamics being resolved."""


class TruncationWarning(UserWarning):
    """Probability mass is leaking into the top of a truncated basis."""
