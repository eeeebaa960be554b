"""Exception hierarchy shared by every vsn_alloc subpackage."""

from __future__ import annotations

from typing import TYPE_CHECKING, Any

if TYPE_CHECKING:
    from vsn_alloc.model.validate import Violation


class VsnError(Exception):
    """Root of all errors raised by vsn_alloc."""


class DomainError(VsnError, ValueError):
    """An argument lies outside the domain of an operation.

    Non-positive transmit powers, non-viable links, fixes outside a
    variable's bounds.
    """


class ScenarioLookupError(VsnError, LookupError):
    """Unknown node, application or test-point id."""


class ConfigurationError(VsnError):
    """Scenario or experiment parameters that cannot produce a valid instance."""


class ModelError(VsnError):
    """A model was passed to an operation whose preconditions it violates."""


class NumericalBreakdownError(VsnError):
    """The simplex lost numerical control.

    Raised instead of returning a possibly wrong answer.  ``diagnostics``
    carries whatever was measured at the time (iteration, residuals,
    basis condition number).
    """

    def __init__(self, message: str, diagnostics: dict[str, Any] | None = None) -> None:
        self.diagnostics = diagnostics or {}
        detail = ", ".join(f"{k}={v}" for k, v in self.diagnostics.items())
        super().__init__(f"{message} ({detail})" if detail else message)


class InstanceTooLargeError(VsnError):
    """The enumeration oracle refuses instances beyond its assignment budget."""


class HeuristicAbortedError(VsnError):
    """The rounding heuristic could not continue; ``trace`` holds its decisions."""

    def __init__(self, message: str, trace: list[Any]) -> None:
        self.trace = trace
        super().__init__(message)


class SolutionValidationError(VsnError):
    """A solution that should be valid failed independent validation."""

    def __init__(self, message: str, violations: list[Violation]) -> None:
        self.violations = violations
        tags = ", ".join(v.tag for v in violations[:10])
        super().__init__(f"{message}: {tags}")
