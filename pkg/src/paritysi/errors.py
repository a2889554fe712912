"""Exception hierarchy shared by the solver and the command line."""


class ParityGameError(Exception):
    """Base class for all errors raised by :mod:`paritysi`."""


class ParseError(ParityGameError):
    """Malformed PGSolver input. Carries the 1-based line and column."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


class GameError(ParityGameError, ValueError):
    """A game violates a structural invariant (terminal vertex, bad edge, ...)."""


class NotAdmissibleError(ParityGameError):
    """Odd can close a cycle using only Odd vertices; run preprocessing first."""


class DomainError(ParityGameError, ValueError):
    """Valuations over different priority domains, or a priority outside the domain."""


class InvariantViolation(ParityGameError):
    """An internal solver invariant failed. Indicates a bug or an inadmissible strategy."""


class SolveTimeout(ParityGameError):
    """The configured time limit elapsed before the solver terminated."""
