"""
Exception hierarchy shared by every hbergman module.

Each class also derives from the closest builtin so callers can catch
``ValueError`` or ``ArithmeticError`` without importing this module.
"""


class HBergmanError(Exception):
    """Base class for all library errors."""


class PoleError(HBergmanError, ValueError):
    """A Gamma argument is a nonpositive integer."""


class DomainError(HBergmanError, ValueError):
    """An argument lies outside the domain of the operation."""


class DivergenceError(HBergmanError, ArithmeticError):
    """A hypergeometric series does not converge at the requested argument."""


class StencilError(HBergmanError, ValueError):
    """A finite-difference stencil would leave the open ball."""


class QuadratureError(HBergmanError, ArithmeticError):
    """A quadrature error estimate stayed above its tolerance."""


class TruncationError(HBergmanError, ArithmeticError):
    """A kernel series would need more terms than the configured cap."""


class DegenerateFitError(HBergmanError, ValueError):
    """Growth-fit samples cannot determine an exponent."""


class ConditionError(HBergmanError, ValueError):
    """A check was requested outside the parameter range where it is meaningful."""


class UnsupportedError(HBergmanError, NotImplementedError):
    """The requested integration is not available for this dimension or integrand."""


class ConvergenceError(HBergmanError, ArithmeticError):
    """An iterative numerical procedure failed to converge."""


class UsageError(HBergmanError, ValueError):
    """Invalid command-line usage."""
