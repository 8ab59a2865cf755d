"""Exception hierarchy and the small validation report shared by all modules."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


class QkanError(Exception):
    """Base class for every error raised by the engine."""


class StructureError(QkanError):
    """Tables have the wrong shape, or an index falls outside its lattice."""


class TypeMismatch(QkanError):
    """Arrows, matrices or categories whose domains/codomains do not line up."""


class ValidationError(QkanError):
    """An axiom failed; ``report`` carries the first witness."""

    def __init__(self, message: str, report: "Report | None" = None):
        super().__init__(message)
        self.report = report


class PreconditionError(QkanError):
    """An operation was called outside its contract (e.g. non-regular psi)."""


class BudgetExceeded(QkanError):
    """An enumeration would exceed its candidate budget."""

    def __init__(self, what: str, count: int, budget: int):
        super().__init__(f"{what}: {count} candidates exceed budget {budget}")
        self.what = what
        self.count = count
        self.budget = budget


class InternalError(QkanError):
    """Two routes that must agree disagreed. Always a bug."""


@dataclass(frozen=True)
class Report:
    """Verdict of a validation: ``ok`` plus the first violated axiom and witness."""

    ok: bool
    axiom: str | None = None
    witness: Any = None
    detail: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok

    def require(self) -> None:
        if not self.ok:
            raise ValidationError(f"axiom violated: {self.axiom} at {self.witness}", self)
