"""Core configuration and error types."""

from minimax_tomography.core.config import Settings, get_settings, reload_settings
from minimax_tomography.core.exceptions import (
    DegenerateFrameError,
    DegeneratePosteriorError,
    EmptyDataError,
    EnumerationTooLargeError,
    InvalidArgumentError,
    NotInformationallyCompleteError,
    TomographyError,
    UsageError,
)

__all__ = [
    "Settings",
    "get_settings",
    "reload_settings",
    # Errors
    "TomographyError",
    "InvalidArgumentError",
    "DegenerateFrameError",
    "NotInformationallyCompleteError",
    "EmptyDataError",
    "DegeneratePosteriorError",
    "EnumerationTooLargeError",
    "UsageError",
]
