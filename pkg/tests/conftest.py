from pathlib import Path
import sys

import pytest

PROJECT_ROOT = Path(__file__).resolve().parents[1]

if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

from qcal.calculus.qverify import run_all  # noqa: E402
from qcal.schemas.evaluation import EvalConfig  # noqa: E402
from qcal.schemas.verification import IdentityReport  # noqa: E402


@pytest.fixture
def cfg() -> EvalConfig:
    return EvalConfig(rel_tol=1e-14)


@pytest.fixture(scope="session")
def registry_reports() -> list[IdentityReport]:
    return run_all()
