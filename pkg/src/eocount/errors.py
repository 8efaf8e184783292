"""Exception types shared across the package."""
from __future__ import annotations


class Undecided(RuntimeError):
    """A question could not be settled within the configured caps or budgets."""

    def __init__(self, reason: str) -> None:
        super().__init__(reason)
        self.reason = reason


class BudgetExceeded(Undecided):
    pass


class InvariantViolation(RuntimeError):
    """An internal consistency check failed; never raised for bad input."""


class WalkCycled(RuntimeError):
    """The outside-mapping walk revisited a state without returning to its vertex."""
