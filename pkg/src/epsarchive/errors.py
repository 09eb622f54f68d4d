"""Exception types raised across the package."""


class EpsArchiveError(Exception):
    """Base class for all package errors."""


class DimensionError(EpsArchiveError, ValueError):
    """Vector lengths disagree with each other or with the problem."""


class ConfigurationError(EpsArchiveError, ValueError):
    """Invalid settings, generator/problem mismatch, bad parameters."""


class DomainError(EpsArchiveError, ValueError):
    """A quantity is undefined for the given arguments (empty set, zero radius)."""


class EvaluationError(EpsArchiveError, ArithmeticError):
    """Objective evaluation produced non-finite values."""


class FeasibleRegionError(EpsArchiveError, RuntimeError):
    """Rejection sampling could not find feasible points at a usable rate."""


class SizeError(EpsArchiveError, ValueError):
    """A brute-force grid would exceed the configured cell cap."""


class ParseError(EpsArchiveError, ValueError):
    """Malformed input file; ``line`` is the 1-based offending line."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InvariantError(EpsArchiveError, AssertionError):
    """An archive invariant does not hold."""
