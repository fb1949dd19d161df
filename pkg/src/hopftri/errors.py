"""Exception types shared across the package."""

from __future__ import annotations


class HopfTriError(Exception):
    """Base class for all package errors."""


class StructuralError(HopfTriError):
    """Malformed input: wrong shapes, bad wiring, missing nodes."""


class ParseError(HopfTriError):
    """A file or builtin reference could not be read.

    ``location`` names the offending field (and line, when known).
    """

    def __init__(self, message: str, location: str | None = None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class NotAdmissibleError(HopfTriError):
    """The stabilizer bracket admits no usable normalization root."""
