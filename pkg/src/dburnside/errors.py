"""Shared exceptions and the wall-clock computation budget."""

from __future__ import annotations

import time


class GroupSpecError(ValueError):
    """Malformed group description text or constructor arguments."""


class PreconditionError(ValueError):
    """An operation was invoked outside its stated domain."""


class BudgetExceeded(RuntimeError):
    """An enumeration ran past its allotted budget.

    ``partial_count`` reports how many items had been produced when the
    budget ran out, so callers can distinguish "no" from "gave up".
    """

    def __init__(self, message: str, partial_count: int = 0):
        super().__init__(message)
        self.partial_count = partial_count


class Budget:
    """Deadline checked inside enumeration loops.

    A ``Budget(None)`` never expires.  Budgets are advisory: loops call
    :meth:`check` at natural checkpoints, so overshoot is bounded by the
    cost of one inner step.
    """

    def __init__(self, seconds: float | None = None):
        self.seconds = seconds
        self._deadline = None if seconds is None else time.monotonic() + seconds

    def expired(self) -> bool:
        return self._deadline is not None and time.monotonic() > self._deadline

    def check(self, what: str, partial: int = 0) -> None:
        if self.expired():
            raise BudgetExceeded(f"budget exhausted during {what}", partial)


NO_BUDGET = Budget(None)
