from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings as hypothesis_settings

from cubica import reports

FIXTURES = Path(__file__).parent / "fixtures"

# Symbolic checks on generic pipes are slow compared to plain arithmetic
hypothesis_settings.register_profile(
    "cubica", max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
hypothesis_settings.load_profile("cubica")


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(autouse=True)
def fresh_report_sink(monkeypatch):
    """Every test starts without a cached report sink"""
    monkeypatch.setattr(reports, "_sink_instance", None)
