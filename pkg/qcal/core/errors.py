from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from qcal.schemas.evaluation import EvalStatus


class QCalError(Exception):
    """Base class for every error raised by qcal."""


class QDomainError(QCalError, ValueError):
    """Input outside the mathematical domain of an operation."""


class QRangeError(QCalError, OverflowError):
    """Result exceeds the double-precision range."""


class UnknownIdentityError(QCalError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown identity"


class EvaluationError(QCalError):
    """
    Raised when a non-converged evaluation is used as a plain value.
    """

    def __init__(self, status: EvalStatus, context: str = "") -> None:
        self.status = status
        detail = f"evaluation did not converge (status={status.value})"
        if context:
            detail = f"{context}: {detail}"
        super().__init__(detail)
