import pytest
from fastapi.testclient import TestClient

from hpdegrees.main import app
from hpdegrees.models import ReportConfig


@pytest.fixture
def client():
    app.state.limiter.reset()
    with TestClient(app) as c:
        yield c


@pytest.fixture
def small_config() -> ReportConfig:
    return ReportConfig(pmax=7, nmax=6, scan_guard=2**16, jobs=1, ktheory_check_bound=8)
