from __future__ import annotations

from enum import Enum

from pydantic import Field, model_validator

from qcal.schemas.base import QModel
from qcal.schemas.evaluation import EvalMethod, EvalStatus


class SweepFunction(str, Enum):
    eq = "eq"
    Eq = "Eq"
    calE = "calE"
    sin_q = "sin_q"
    cos_q = "cos_q"
    Sin_q = "Sin_q"
    Cos_q = "Cos_q"
    tan_q = "tan_q"
    Tan_q = "Tan_q"
    calSin = "calSin"
    calCos = "calCos"


class SweepVariable(str, Enum):
    x_real = "x_real"
    x_imag_axis = "x_imag_axis"


class SweepSpec(QModel):
    function: SweepFunction
    q: float = Field(gt=0)
    var: SweepVariable = SweepVariable.x_real
    start: float
    stop: float
    steps: int = Field(ge=2)
    method: EvalMethod = EvalMethod.Auto
    rel_tol: float | None = Field(default=None, gt=0, lt=1)

    @model_validator(mode="after")
    def _ordered_axis(self) -> SweepSpec:
        if not self.start < self.stop:
            raise ValueError(f"sweep needs start < stop, got {self.start} >= {self.stop}")
        return self

    def argument(self, x: float) -> complex:
        if self.var is SweepVariable.x_imag_axis:
            return complex(0.0, x)
        return complex(x)


class SweepRow(QModel):
    x: float
    value: complex | None = None
    terms: int = 0
    err_estimate: float
    status: EvalStatus
