"""
Exception hierarchy shared by every package.

Each error also derives from the closest builtin so that callers catching
``ValueError`` or ``RuntimeError`` keep working.
"""
from typing import Optional


class PganError(Exception):
    """Base class for all pgan-poison errors."""


class ShapeError(PganError, ValueError):
    """Array dimensions do not chain or do not match."""


class InputError(PganError, ValueError):
    """Invalid input values (non-finite data, bad labels, empty batches)."""


class CacheError(PganError, RuntimeError):
    """A forward cache is stale or belongs to another network."""


class ConfigurationError(PganError, ValueError):
    """Invalid configuration, optionally naming the offending field path."""

    def __init__(self, message: str, field: Optional[str] = None):
        self.field = field
        if field:
            message = f"{field}: {message}"
        super().__init__(message)


class CapacityError(PganError, ValueError):
    """Not enough rows to satisfy a request."""


class FormatError(PganError, ValueError):
    """A file does not follow its binary or text format."""


class SpecError(PganError, ValueError):
    """An invalid distribution or split specification."""


class SweepCellError(PganError, RuntimeError):
    """A sweep cell failed; carries the cell coordinates."""

    def __init__(self, fraction: float, generator_id: int, run_id: int, cause: BaseException):
        self.fraction = fraction
        self.generator_id = generator_id
        self.run_id = run_id
        self.cause = cause
        super().__init__(
            f"cell (fraction={fraction}, generator={generator_id}, run={run_id}) "
            f"failed: {type(cause).__name__}: {cause}"
        )
