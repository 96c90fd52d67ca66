# kinetics/errors.py
"""Exceptions raised by the kinetics, synthetic-data and file-format layers.

Input errors subclass ValueError so callers that only care about "bad input"
can keep catching ValueError. The two solver preconditions are ArithmeticError;
solve_direct handles them itself.
"""


class NonFiniteError(ValueError):
    """A value that must be finite is NaN or infinite."""


class NegativeRateError(ValueError):
    """A rate constant is below zero."""


class InvalidGridError(ValueError):
    """Time grid is not strictly increasing from 0, or is too short."""


class DegenerateEigenvaluesError(ArithmeticError):
    """The two eigenvalues coincide; the closed forms divide by their difference."""


class ZeroEigenvalueError(ArithmeticError):
    """An eigenvalue is zero; the C_u closed form divides by it."""


class InvalidScheduleError(ValueError):
    """Acquisition frame times are not positive and strictly increasing."""


class ZeroVolumeError(ValueError):
    """Error bars requested with zero volume (or zero count scale)."""


class LengthMismatchError(ValueError):
    """Two sequences that must be aligned have different lengths."""


class NonMonotoneTimeError(ValueError):
    """Measurement times are not strictly increasing."""


class NegativeValueError(ValueError):
    """A measured concentration or error bar is negative."""


class ConfigError(ValueError):
    """Run configuration is incomplete or contains unknown keys."""


class ParseError(ValueError):
    """A measurement file could not be parsed; carries the offending position."""

    def __init__(self, message, row=None, column=None):
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column '{column}'")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
        self.row = row
        self.column = column
