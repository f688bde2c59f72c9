"""Exception hierarchy shared by every module.

The CLI maps these onto process exit codes, so the distinction between
"your inputs are wrong" and "the series did not converge" is part of the
public contract, not just documentation.
"""


class FracpoisError(Exception):
    """Base class for all library-specific errors."""


class ParameterError(FracpoisError, ValueError):
    """Inputs violate a documented precondition (exit code 2)."""


class ConvergenceError(FracpoisError, ArithmeticError):
    """A series or quadrature failed to reach tolerance (exit code 3)."""


class UnsupportedVariantError(FracpoisError, ValueError):
    """The requested process variant has no implementation path (exit code 4)."""
