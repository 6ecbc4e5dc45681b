"""Exception hierarchy for gazekit.

Split into two families so callers (CLI, service) can map failures to
exit codes / HTTP statuses: ``ValidationError`` for bad inputs or bad
parameters, ``IOFailure`` for unreadable files.
"""
from __future__ import annotations


class GazekitError(Exception):
    """Base class for all gazekit errors."""


class ValidationError(GazekitError):
    """Input data or parameters violate a documented contract."""


class IOFailure(GazekitError):
    """A file could not be read or written."""


class MalformedCoordinate(ValidationError):
    """Coordinate text does not match the ``(x, y)`` grammar."""

    def __init__(self, reason: str, text: str) -> None:
        super().__init__(f"malformed coordinate {text!r}: {reason}")
        self.reason = reason
        self.text = text


class FileUnreadable(IOFailure):
    pass


class MissingColumn(ValidationError):
    def __init__(self, name: str) -> None:
        super().__init__(f"required column {name!r} not found in header")
        self.name = name


class EmptyAfterCleaning(ValidationError):
    """Every row of a file was dropped during cleaning."""


class DuplicateLevel(ValidationError):
    pass


class MixedStudents(ValidationError):
    pass


class TooFewSamples(ValidationError):
    """Fewer samples than the operation needs (velocities need two)."""


class EmptyAfterOutlierRemoval(ValidationError):
    pass


class NonMonotonicTimestamps(ValidationError):
    pass


class NoClassifiedSamples(ValidationError):
    pass


class EmptySession(ValidationError):
    pass


class IncompleteAnalysis(ValidationError):
    pass


class UnknownChart(ValidationError):
    def __init__(self, chart_id: str, known: tuple[str, ...]) -> None:
        super().__init__(f"unknown chart {chart_id!r}; known charts: {', '.join(known)}")
        self.chart_id = chart_id
