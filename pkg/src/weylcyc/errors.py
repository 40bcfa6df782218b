"""Exception hierarchy shared by every module."""


class WeylcycError(Exception):
    pass


class NotAUnit(WeylcycError, ZeroDivisionError):
    pass


class ContextMismatch(WeylcycError, ValueError):
    pass


class DegreeError(WeylcycError, ValueError):
    pass


class NotSymplectic(WeylcycError, ValueError):
    pass


class NotInLieAlgebra(WeylcycError, ValueError):
    pass


class CayleySingular(WeylcycError, ZeroDivisionError):
    pass


class DetSingular(WeylcycError, ZeroDivisionError):
    pass


class NotIdempotent(WeylcycError, ValueError):
    pass


class TruncationError(WeylcycError, ValueError):
    pass


class ParseError(WeylcycError, ValueError):
    """Syntax error; ``pos`` is the 1-based offset of the offending character.

    ``line`` and ``col`` locate the same character in multi-line input.
    """

    def __init__(self, message, pos, line=1, col=None):
        super().__init__(f"{message} at position {pos}")
        self.reason = message
        self.pos = pos
        self.line = line
        self.col = pos if col is None else col


class UnknownGenerator(ParseError):
    pass
