"""Exception hierarchy shared by all modules."""


class FracLyapError(Exception):
    """Base class for every error raised by this package."""


class DomainError(FracLyapError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class GridLengthError(FracLyapError, ValueError):
    """A grid function is too short for the requested operator."""


class GridIndexError(FracLyapError, IndexError):
    """A row/column index is outside the Green table."""


class EmptyWindowError(FracLyapError, ValueError):
    """The central cone window contains no grid point."""


class ZeroSumError(FracLyapError, ValueError):
    """A reciprocal constant was requested of a vanishing weighted sum."""


class InvariantViolation(FracLyapError, AssertionError):
    """An internal invariant failed; this signals a bug, not bad input."""


class SingularSystemError(FracLyapError, ArithmeticError):
    """The assembled boundary value system is numerically singular."""


class IterationError(FracLyapError, ArithmeticError):
    """NaN or overflow was produced during fixed-point iteration."""
