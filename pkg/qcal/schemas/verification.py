from pydantic import Field

from qcal.schemas.base import QModel


class GridPoint(QModel):
    arg: complex
    q: float = Field(gt=0)


class IdentitySpec(QModel):
    id: str
    grid: list[GridPoint]
    tolerance: float = Field(gt=0)
    # points the grid generator dropped next to known poles
    skipped: int = Field(default=0, ge=0)


class WorstPoint(QModel):
    arg_re: float
    arg_im: float
    q: float


class IdentityReport(QModel):
    id: str
    samples_evaluated: int = Field(ge=0)
    skipped: int = Field(ge=0)
    max_residual: float
    mean_residual: float
    worst_point: WorstPoint | None = None
    passed: bool


class CheckReport(QModel):
    schema_version: int = Field(default=1, serialization_alias="schema")
    reports: list[IdentityReport]
