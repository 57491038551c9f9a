"""Error types raised by the estimation, risk and search services.

All errors derive from TomographyError, which is a plain Exception so that
errors raised inside pydantic validators propagate with their own type.
"""

from typing import Optional


class TomographyError(Exception):
    """Base class for numeric and guard errors (CLI exit code 2)."""

    def __init__(self, message: str = "Tomography error"):
        self.message = message
        super().__init__(self.message)


class InvalidArgumentError(TomographyError):
    """Raised when an argument violates an operation's precondition."""

    def __init__(self, message: str = "Invalid argument"):
        super().__init__(message)


class DegenerateFrameError(TomographyError):
    """Raised when a POM has no dual frame (outcomes are multiples of the identity)."""

    def __init__(self, message: str = "Degenerate frame: wK - 1 vanishes"):
        super().__init__(message)


class NotInformationallyCompleteError(TomographyError):
    """Raised when a state reconstruction needs an informationally complete POM."""

    def __init__(self, message: str = "POM is not informationally complete"):
        super().__init__(message)


class EmptyDataError(TomographyError):
    """Raised when a count vector has no clicks at all."""

    def __init__(self, message: str = "empty data"):
        super().__init__(message)


class DegeneratePosteriorError(TomographyError):
    """Raised when every Monte Carlo sample is rejected by the physicality cut."""

    def __init__(
        self,
        message: str = "All posterior samples were rejected",
        acceptance_rate: float = 0.0,
    ):
        self.acceptance_rate = acceptance_rate
        super().__init__(f"{message} (acceptance rate {acceptance_rate:.3g})")


class EnumerationTooLargeError(TomographyError):
    """Raised when an outcome enumeration would exceed the configured size guard."""

    def __init__(
        self,
        message: str = "Outcome enumeration too large",
        cardinality: Optional[int] = None,
    ):
        self.cardinality = cardinality
        if cardinality is not None:
            message = f"{message}: {cardinality} count vectors"
        super().__init__(message)


class UsageError(Exception):
    """Raised for malformed command lines (CLI exit code 1)."""

    def __init__(self, message: str = "Invalid usage"):
        self.message = message
        super().__init__(self.message)
