"""Shared error types and the validation-report row used across the kernel."""

from __future__ import annotations

from dataclasses import dataclass


class KernelError(Exception):
    """A kernel operation was called with arguments that violate its contract."""


class ExclusionError(KernelError):
    """A construction would put a coherent filler and a gap witness on the same horn."""

    def __init__(self, message: str, conflicts=()):
        super().__init__(message)
        self.conflicts = tuple(conflicts)


class DocumentError(Exception):
    """A document failed to parse or does not match its schema.

    ``position`` is a human-readable locator (JSON line/column or key path).
    """

    def __init__(self, message: str, position: str | None = None):
        super().__init__(message)
        self.position = position

    def __str__(self) -> str:
        base = super().__str__()
        if self.position:
            return f"{base} (at {self.position})"
        return base


@dataclass(frozen=True)
class Violation:
    """One row of a validation report.

    ``kind`` is a stable machine-checkable code; ``message`` is the
    human-readable line the CLI prints.
    """

    kind: str
    message: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"
