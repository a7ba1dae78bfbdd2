"""Exception hierarchy shared by every copshield module."""

from __future__ import annotations


class CopShieldError(Exception):
    """Base class for all library errors."""


class InvalidVertexError(CopShieldError, ValueError):
    pass


class DisconnectedError(CopShieldError, ValueError):
    pass


class SizeLimitError(CopShieldError):
    """An exponential routine was asked to work past its configured size cap."""


class BudgetExceededError(CopShieldError):
    """A state-space or configuration budget was exhausted."""


class IllegalMoveError(CopShieldError):
    def __init__(self, message: str, step: int | None = None) -> None:
        super().__init__(message if step is None else f"step {step}: {message}")
        self.step = step


class PreconditionError(CopShieldError, ValueError):
    pass


class RetryBudgetExhausted(CopShieldError):
    pass


class DomainError(CopShieldError, ValueError):
    """Numeric input outside the domain of a closed-form bound."""
