"""Exception and warning types shared across the toolkit.

Every error carries a machine-readable ``code`` so the CLI can emit
structured error objects and map failures to exit codes.
"""

from __future__ import annotations


class ToolkitError(Exception):
    """Base class for all toolkit errors."""

    code = "TOOLKIT_ERROR"

    def __init__(self, message: str, *, code: str | None = None):
        super().__init__(message)
        if code is not None:
            self.code = code

    @property
    def message(self) -> str:
        return str(self)


class DomainError(ToolkitError):
    """An argument lies outside the mathematical domain of an operation."""

    code = "DOMAIN_ERROR"


class RangeError(ToolkitError):
    """An argument violates its documented admissible range."""

    code = "RANGE_ERROR"


class InvariantError(ToolkitError):
    """A structural invariant of a record or dataset is violated."""

    code = "INVARIANT_ERROR"


class ParseError(ToolkitError):
    """A file or config value could not be parsed."""

    code = "PARSE_ERROR"


class MissingColumnError(ParseError):
    code = "MISSING_COLUMN"


class MissingFileError(ToolkitError):
    code = "FILE_NOT_FOUND"


class ConfigError(ToolkitError):
    code = "CONFIG_ERROR"


class CurrencyMismatchError(ToolkitError):
    code = "CURRENCY_MISMATCH"


class NoComparablesError(ToolkitError):
    """Market approach to direct value requires at least one comparable."""

    code = "NO_COMPARABLES"


class DuplicateComponentError(ToolkitError):
    """A non-use component kind appears more than once in one breakdown."""

    code = "DUPLICATE_COMPONENT"


class EmptyCategoryError(ToolkitError):
    """No usable pipeline records exist for the requested crime category."""

    code = "EMPTY_CATEGORY"


class NoCrossingError(ToolkitError):
    """Supply and tolerated-crime curves do not bracket an equilibrium."""

    code = "NO_CROSSING"


class TooFewAlternativesError(ToolkitError):
    """Opportunity cost needs at least two alternatives to compare."""

    code = "TOO_FEW_ALTERNATIVES"


class ModelWarning(UserWarning):
    """Base class for non-fatal analysis warnings surfaced in reports."""


class MissingEstimateWarning(ModelWarning):
    """Normative direct value returned as a bare cap with no estimate."""


class EmptyComponentWarning(ModelWarning):
    """A willingness-to-pay component had zero valid survey responses."""
