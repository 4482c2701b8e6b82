"""Exception hierarchy shared by every module."""


class CNRError(Exception):
    """Base class for all errors raised by cnumrange."""


class ShapeError(CNRError, ValueError):
    """Matrix has the wrong shape or structure (non-square, non-Hermitian)."""


class DimensionError(CNRError, ValueError):
    """Ambient dimension is too small for the requested operation."""


class ContractError(CNRError, ValueError):
    """Inputs violate a documented precondition."""


class NumericError(CNRError, ArithmeticError):
    """An iterative routine failed to converge."""


class InconsistencyError(NumericError):
    """A numerical self-check contradicted a proven identity (a bug, not a math outcome)."""


class ParseError(CNRError, ValueError):
    """Malformed matrix or coefficient input."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(message + where)


class ConfigError(CNRError, ValueError):
    """Invalid command-line or verification configuration."""
