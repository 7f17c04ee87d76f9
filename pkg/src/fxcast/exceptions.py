"""Exception hierarchy shared across the package.

Three branches matter to callers: configuration problems, data problems,
and numerical failures.  The command line maps them to exit codes 2, 3
and 4 respectively.
"""


class FxcastError(Exception):
    """Base class for every error raised by this package."""


class ConfigError(FxcastError):
    """Malformed or contradictory run configuration."""


class DataError(FxcastError):
    """Input data violates a precondition of the requested operation."""


class MissingColumnError(DataError):
    """A required column is absent from the input file."""


class DateParseError(DataError):
    """A date cell could not be parsed as an ISO calendar date."""


class DuplicateDateError(DataError):
    """The same calendar date appears more than once."""


class NonPositiveRateError(DataError):
    """An exchange rate is zero or negative."""


class ShortSeriesError(DataError):
    """The series is too short for the requested operation."""


class DegenerateSeriesError(DataError):
    """The series has zero variance where dispersion is required."""


class NumericalError(FxcastError):
    """A numerical routine failed to produce a usable result."""


class ConvergenceError(NumericalError):
    """An iterative estimator failed to converge from every start."""
