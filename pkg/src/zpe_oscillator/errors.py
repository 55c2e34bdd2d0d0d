"""Exception types raised by the library."""


class DomainError(ValueError):
    """An argument lies outside the physical domain of an operation."""


class TruncationError(RuntimeError):
    """A level sum cannot be truncated within the allowed number of terms."""


class ConvergenceError(RuntimeError):
    """An iterative solver failed to converge."""


class NonFiniteError(ArithmeticError):
    """A user-supplied function returned a non-finite value."""
