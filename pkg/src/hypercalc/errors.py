"""Exception hierarchy shared by every layer of the package.

Errors raised while evaluating an expression tree carry the path of the
offending node (a tuple of "L"/"R" steps from the root) so diagnostics can
point at the exact subterm.
"""

from __future__ import annotations


class HypercalcError(Exception):
    """Base class for all package errors."""

    def __init__(self, message: str, *, path: tuple[str, ...] | None = None):
        super().__init__(message)
        self.message = message
        self.path = path

    def __str__(self) -> str:
        if self.path is not None:
            return f"{self.message} (at {format_path(self.path)})"
        return self.message


def format_path(path: tuple[str, ...]) -> str:
    return ".".join(path) if path else "root"


class ParseError(HypercalcError):
    """Malformed expression text; `offset` is the 0-based character offset."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class DomainError(HypercalcError):
    """Operand outside the mathematical domain of an operation."""


class ResourceError(HypercalcError):
    """A configured structural or magnitude cap was exceeded."""


class MagnitudeError(ResourceError):
    """A value's magnitude passed the blow-up cap.

    Raised only where intermediates grow monotonically, so callers
    comparing against a modest target may safely conclude "too big".
    """


class ConvergenceError(HypercalcError):
    """Iteration budget exhausted before the requested accuracy was met."""


class AmbiguityError(ConvergenceError):
    """A sign could not be resolved at the maximum allowed precision."""


class PrecisionError(HypercalcError):
    """Digits (or an enclosure) could not be certified at the precision cap."""
