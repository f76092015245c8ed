from pydantic import BaseModel, Field
from dotenv import load_dotenv
import os

load_dotenv()


def _env(name: str, default: str) -> str:
    return os.getenv(name, default)


class Settings(BaseModel):
    QCAL_SEED: int = Field(default_factory=lambda: int(_env("QCAL_SEED", "42")))
    QCAL_REL_TOL: float = Field(default_factory=lambda: float(_env("QCAL_REL_TOL", "1e-14")))
    QCAL_MAX_TERMS: int = Field(default_factory=lambda: int(_env("QCAL_MAX_TERMS", "512")))
    QCAL_MAX_FACTORS: int = Field(default_factory=lambda: int(_env("QCAL_MAX_FACTORS", "2048")))
    QCAL_POINTS_PER_IDENTITY: int = Field(
        default_factory=lambda: int(_env("QCAL_POINTS_PER_IDENTITY", "200"))
    )
    QCAL_LOG_LEVEL: str = Field(default_factory=lambda: _env("QCAL_LOG_LEVEL", "WARNING"))


settings = Settings()
