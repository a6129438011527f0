"""Exception hierarchy shared across the workbench.

``DiagkitError`` marks domain-level failures the CLI maps to exit code 1;
anything else escaping is a bug.
"""

from __future__ import annotations

__all__ = [
    "DiagkitError",
    "ReasonerError",
    "ReasonerBudgetError",
    "ScaleBoundError",
    "NoDiagnosisError",
    "SentenceSyntaxError",
    "DpiFormatError",
    "QueryError",
    "StaleQueryError",
    "NoDiscriminatingMeasurementError",
    "SessionStateError",
    "UnknownEngineError",
]


class DiagkitError(Exception):
    """Base class for all domain errors raised by the workbench."""


class ReasonerError(DiagkitError):
    """The consistency oracle failed to produce a verdict."""


class ReasonerBudgetError(ReasonerError):
    """The solver exceeded its configured step budget."""


class ScaleBoundError(DiagkitError):
    """An exhaustive operation was asked to exceed its instance-size bound."""


class NoDiagnosisError(DiagkitError):
    """The instance admits no diagnosis even with every component abnormal."""


class SentenceSyntaxError(DiagkitError):
    """Malformed sentence text; carries a 1-based source location."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


class DpiFormatError(DiagkitError):
    """Malformed or semantically invalid ``.dpi`` document."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        loc = f" (line {line}, column {col})" if line else ""
        super().__init__(f"{message}{loc}")
        self.line = line
        self.col = col


class QueryError(DiagkitError):
    """Invalid diagnosis query parameters for the requested engine."""


class StaleQueryError(DiagkitError):
    """An answer was posted for a measurement query that is no longer pending."""


class NoDiscriminatingMeasurementError(DiagkitError):
    """Every candidate measurement leaves the leading diagnoses one-sided."""


class SessionStateError(DiagkitError):
    """Operation not valid in the session's current status."""


class UnknownEngineError(DiagkitError):
    """No engine is registered under the requested identifier."""
