"""Exception types raised across the package."""

from __future__ import annotations


class DualTestError(Exception):
    """Base class for all package errors."""


class EmptyOrTooSmall(DualTestError, ValueError):
    pass


class NonFiniteValue(DualTestError, ValueError):
    """A NaN or infinite value where a finite one is required.

    ``index`` is the position of the offending element when the input was a
    sequence, else ``None``.
    """

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class POutOfRange(DualTestError, ValueError):
    pass


class ZeroBins(DualTestError, ValueError):
    pass


class SingleClassInput(DualTestError, ValueError):
    pass


class DimensionMismatch(DualTestError, ValueError):
    pass


class LengthMismatch(DualTestError, ValueError):
    pass


class BadRange(DualTestError, ValueError):
    pass


class ParseError(DualTestError, ValueError):
    """Malformed input file. ``row`` is 1-based and counts the header line."""

    def __init__(self, message: str, row: int | None = None):
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)
        self.row = row


class NonFiniteScore(ParseError):
    pass


class UnsupportedVersion(DualTestError, ValueError):
    pass
ShapeMismatch = DimensionMismatch
