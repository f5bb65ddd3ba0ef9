from __future__ import annotations

import numpy as np
import pytest

from rmd.core.matrices import ObservedMatrix, support_from
from rmd.solvers import runner
from tests.helpers.metrics_stub import StubMetrics
from tools import telemetry


@pytest.fixture
def example_x() -> ObservedMatrix:
    """The 2x2 matrix [[1, 0], [0.5, 1]]."""
    return support_from([[1.0, 0.0], [0.5, 1.0]])


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def stub_metrics(monkeypatch) -> StubMetrics:
    stub = StubMetrics()
    monkeypatch.setattr(runner, "metrics", stub)
    return stub


@pytest.fixture(autouse=True)
def _isolated_telemetry(monkeypatch):
    monkeypatch.delenv("RMD_TELEMETRY_FORMAT", raising=False)
    monkeypatch.delenv("RMD_TELEMETRY_PATH", raising=False)
    telemetry.reset_telemetry_for_testing()
    yield
    telemetry.reset_telemetry_for_testing()
