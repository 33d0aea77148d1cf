"""Semantic exceptions shared across the package.

The CLI maps these onto exit codes: ValidationError -> 1,
NumericalError (and I/O failures) -> 2.
"""


class CoxSplitError(Exception):
    """Base class for all package errors."""


class ValidationError(CoxSplitError, ValueError):
    """Invalid configuration or argument outside its documented domain."""


class InfeasibilityError(ValidationError):
    """Requested exhaustive computation exceeds the combination budget."""


class NumericalError(CoxSplitError, ArithmeticError):
    """A numerical routine failed to reach its accuracy target."""

    def __init__(self, message: str, achieved_error: float | None = None):
        super().__init__(message)
        self.achieved_error = achieved_error
