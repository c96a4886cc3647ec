"""
Exception hierarchy. Each error carries the process exit code the CLI
reports for it.
"""
from typing import Optional


class SlidingAucError(Exception):
    """Base class for all toolkit errors."""
    exit_code: int = 1


class ConfigurationError(SlidingAucError):
    """Invalid estimator or pipeline parameters."""
    exit_code = 1


class RejectedInputError(SlidingAucError, ValueError):
    """Event rejected at the boundary: non-finite score or bad label."""
    exit_code = 2


class MalformedRowError(SlidingAucError):
    """A CSV row that cannot be parsed into an event."""
    exit_code = 2

    def __init__(self, line_number: int, reason: str, row: Optional[str] = None):
        self.line_number = line_number
        self.reason = reason
        self.row = row
        super().__init__(f"line {line_number}: {reason}")


class WindowConsistencyError(SlidingAucError):
    """Removal of an entry the window does not hold."""


class ListConsistencyError(SlidingAucError):
    """Weighted linked list misuse: gap underflow, key order, sentinel removal."""


class StructurePreconditionError(SlidingAucError, AssertionError):
    """A tree query was issued for a key with no live node."""


class GuaranteeBreachError(SlidingAucError):
    """An estimate fell outside the approximation guarantee."""
    exit_code = 3
