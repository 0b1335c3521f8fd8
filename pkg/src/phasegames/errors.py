"""Exception types shared across the package.

Every error raised deliberately by this package derives from
:class:`PhaseGamesError`, so callers can catch the whole family at once.
The command line maps subfamilies to exit codes (config 2, capacity 3,
convergence 4).
"""


class PhaseGamesError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(PhaseGamesError, ValueError):
    """A value passed to a constructor or function is out of range."""


class ContractViolationError(PhaseGamesError):
    """An object handed to an operation fails a documented precondition,
    e.g. a non-unitary matrix passed to a gate application."""


class CapacityError(PhaseGamesError):
    """The requested computation exceeds a documented size cap."""


class ConvergenceError(PhaseGamesError):
    """An iterative solver failed to reach its tolerance."""


class BracketError(PhaseGamesError):
    """A root finder was given an interval that does not bracket a sign
    change."""


class GeometryError(PhaseGamesError):
    """A lattice path or loop is not closed, or indices leave the lattice."""


class InvalidMatchingError(ParameterError):
    """A claimed matching has overlapping edges or out-of-range vertices."""


class IncompatibleProtocolError(ParameterError):
    """A protocol was asked to play a game family it does not implement."""


class NoSolutionError(PhaseGamesError):
    """A self-consistency equation has no solution in the requested
    branch, e.g. an ordered mean-field state beyond the critical field."""


class ConfigError(PhaseGamesError):
    """A config file failed to parse or validate.  Carries the offending
    line number when one is known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
