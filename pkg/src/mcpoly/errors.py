# src/mcpoly/errors.py
"""
Exception hierarchy for the mcpoly package.

Every exception carries the process exit code the command-line interface
reports for it.
"""

from typing import Any, Optional


class MCPolyError(Exception):
    """Base class of all errors raised by mcpoly."""
    exit_code: int = 1


class ParseError(MCPolyError, ValueError):
    """An input file or value could not be parsed."""
    exit_code = 2


class ValidationError(MCPolyError, ValueError):
    """An input violates a domain invariant.

    Args:
        message: Human-readable description of the violation.
        field: Path of the offending field, e.g. ``families[1][0].transitions``.
    """
    exit_code = 3

    def __init__(self, message: str, field: Optional[str] = None) -> None:
        self.field = field
        self.message = message
        super().__init__(f"{field}: {message}" if field else message)


class EmptyRestrictedFamilyError(ValidationError):
    """A restricted state family has no members."""


class UnknownSymbolError(ValidationError):
    """A message contains a symbol outside the source alphabet."""


class MalformedStreamError(ValidationError):
    """A bit string is not a valid encoding under the given code."""


class UnsupportedDimensionError(ValidationError):
    """The requested operation is only defined for another value of m."""


class BudgetExceededError(MCPolyError):
    """A configured work budget was exhausted.

    Args:
        message: Description of the exhausted budget.
        best: Best result found before the budget ran out, if any.
    """
    exit_code = 4

    def __init__(self, message: str, best: Any = None) -> None:
        self.best = best
        super().__init__(message)


class InvariantViolationError(MCPolyError, RuntimeError):
    """An internal invariant failed; indicates a bug or inconsistent input."""
    exit_code = 5


class SingularMatrixError(InvariantViolationError):
    """A linear system has no unique solution."""


class IterationCapExceededError(InvariantViolationError):
    """The iterative algorithm hit its safety cap.

    Args:
        message: Description including the cap.
        trace: Iteration records collected before the cap was hit.
    """

    def __init__(self, message: str, trace: Any = None) -> None:
        self.trace = trace
        super().__init__(message)


class PruneDivergedError(InvariantViolationError):
    """The pruning loop produced an invalid index set."""
