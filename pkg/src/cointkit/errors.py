"""Exception hierarchy.

Input problems (bad files, short or misaligned series) derive from
``DataError``; failures of the numerics on otherwise valid input derive
from ``NumericalError``. The CLI maps them to exit codes 1 and 2.
"""


class CointkitError(Exception):
    """Base class for all package errors."""


class DataError(CointkitError, ValueError):
    """Invalid or insufficient input data."""


class InsufficientDataError(DataError):
    pass


class NumericalError(CointkitError, ArithmeticError):
    """The computation is undefined for the given (valid) input."""


class DegenerateError(NumericalError):
    """Zero variance, zero residuals, or a similarly degenerate input."""


class RankDeficientError(NumericalError):
    """Design matrix without full column rank."""
