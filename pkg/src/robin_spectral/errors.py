"""Exception types shared across the package."""


class RobinSpectralError(Exception):
    """Base class for all package errors."""


class DomainError(RobinSpectralError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class OverflowSignal(RobinSpectralError, ArithmeticError):
    """Internal scaling of a special-function evaluation failed."""


class BracketError(RobinSpectralError, RuntimeError):
    """A root bracket with a sign change could not be established."""


class OutOfRangeError(RobinSpectralError, ValueError):
    """A requested target value is outside the attainable range."""


class QuadratureError(RobinSpectralError, RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class MeshError(RobinSpectralError, ValueError):
    """A mesh is degenerate, disconnected, or otherwise invalid."""


class ConvergenceError(RobinSpectralError, RuntimeError):
    """An iterative solver did not converge within its iteration cap."""


class ResolutionError(RobinSpectralError, RuntimeError):
    """A sign-pattern classification is ambiguous at the given resolution."""
