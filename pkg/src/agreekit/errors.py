"""Exception types raised by agreekit.

Every error the library raises derives from :class:`AgreeKitError`, so CLI
code can map any library failure to exit code 1. Parse-time errors carry
1-based line numbers.
"""

from __future__ import annotations


class AgreeKitError(Exception):
    """Base class for all agreekit errors."""


class ParseError(AgreeKitError):
    """Base class for input-file errors; ``line`` is 1-based."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MalformedLine(ParseError):
    """Line is not a well-formed record (bad JSON, bad field count, bad keys)."""


class EmptyField(ParseError):
    """A required field is empty after whitespace trimming."""


class DuplicateAssignment(ParseError):
    """The same annotator labeled the same unit twice."""

    def __init__(self, message: str, first_line: int | None = None, second_line: int | None = None):
        self.first_line = first_line
        if first_line is not None and second_line is not None:
            message = f"lines {first_line} and {second_line}: {message}"
        super().__init__(message, line=second_line)


class UnknownLabel(AgreeKitError):
    """A record's label is outside the declared label space."""


class EmptyDataset(AgreeKitError):
    """No records, or no unit retains enough annotations to compute anything."""


class EmptySlice(AgreeKitError):
    """A slice selector matched nothing."""


class UnknownAnnotator(AgreeKitError):
    """An annotator id is not present in the data."""


class NoPairableUnits(AgreeKitError):
    """Two annotators share no unit with both labels present."""


class InsufficientPairs(AgreeKitError):
    """No unit has at least two present annotations."""


class FewerThanTwoAnnotators(AgreeKitError):
    """Pairwise analysis requires at least two annotators."""


class NoRankableClasses(AgreeKitError):
    """No document class has a computable ranking coefficient."""


class ConfigError(AgreeKitError):
    """Invalid tool configuration."""
