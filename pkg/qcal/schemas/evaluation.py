from __future__ import annotations

import math
from enum import Enum

from pydantic import Field, computed_field, field_validator

from qcal.core.config import settings
from qcal.core.errors import EvaluationError
from qcal.schemas.base import QModel

ABSOLUTE_FLOOR = 1e-300


class Regime(str, Enum):
    SubOne = "SubOne"
    One = "One"
    SuperOne = "SuperOne"


class EvalMethod(str, Enum):
    Auto = "auto"
    Series = "series"
    Product = "product"


class EvalStatus(str, Enum):
    Converged = "Converged"
    CapReached = "CapReached"
    Pole = "Pole"
    OutsideDomain = "OutsideDomain"


class QParam(QModel):
    """Deformation parameter q > 0."""

    q: float

    @field_validator("q")
    @classmethod
    def _positive_finite(cls, value: float) -> float:
        if not math.isfinite(value) or value <= 0:
            raise ValueError("q must be a positive finite real")
        return value

    @computed_field  # type: ignore[prop-decorator]
    @property
    def regime(self) -> Regime:
        if self.q < 1:
            return Regime.SubOne
        if self.q > 1:
            return Regime.SuperOne
        return Regime.One

    def inverse(self) -> QParam:
        return QParam(q=1.0 / self.q)

    def reduced(self) -> QParam:
        """The member of {q, 1/q} that is at most 1."""
        if self.regime is Regime.SuperOne:
            return self.inverse()
        return self


def as_qparam(q: QParam | float) -> QParam:
    if isinstance(q, QParam):
        return q
    return QParam(q=float(q))


class EvalConfig(QModel):
    rel_tol: float = Field(default_factory=lambda: settings.QCAL_REL_TOL, gt=0, lt=1)
    max_terms: int = Field(default_factory=lambda: settings.QCAL_MAX_TERMS, ge=1)
    max_factors: int = Field(default_factory=lambda: settings.QCAL_MAX_FACTORS, ge=1)
    method: EvalMethod = EvalMethod.Auto


class EvalResult(QModel):
    value: complex
    terms_used: int = Field(ge=0)
    err_estimate: float = Field(ge=0)
    status: EvalStatus
    # sum of |term| over |sum|; 1.0 for products and the classical branch
    condition: float = 1.0

    @property
    def converged(self) -> bool:
        return self.status is EvalStatus.Converged

    def require(self, context: str = "") -> complex:
        if not self.converged:
            raise EvaluationError(self.status, context)
        return self.value


class ConvergenceDisc(QModel):
    radius: float
    q: QParam

    def contains(self, z: complex) -> bool:
        return abs(z) < self.radius


class TrigValue(QModel):
    value: float | complex
    status: EvalStatus
    terms_used: int = Field(default=0, ge=0)
    err_estimate: float = Field(default=0.0, ge=0)
    # |imag| of the combination before truncation to a real value
    imag_residue: float = 0.0
    realness_warning: bool = False

    @property
    def converged(self) -> bool:
        return self.status is EvalStatus.Converged

    @property
    def real(self) -> float:
        return complex(self.value).real

    def require(self, context: str = "") -> float | complex:
        if not self.converged:
            raise EvaluationError(self.status, context)
        return self.value
