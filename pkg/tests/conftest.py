from __future__ import annotations

import datetime as dt
from pathlib import Path

import pytest

from qgslight.skysurvey import SkySample
from qgslight.units import SpectralBand

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "fixtures"


@pytest.fixture
def fixtures() -> Path:
    return FIXTURES


def make_sample(**overrides) -> SkySample:
    fields = dict(
        site_id="S",
        timestamp_utc=dt.datetime(2023, 2, 7, 1, 0, tzinfo=dt.timezone.utc),
        azimuth_deg=0.0,
        elevation_deg=45.0,
        band=SpectralBand(850, 10),
        raw_counts=30000,
        integration_s=30.0,
        detector_efficiency=1.0,
        optics_efficiency=1.0,
        dark_rate_hz=0.0,
        moon_label="new",
        fov_half_angle_deg=0.008,
    )
    fields.update(overrides)
    return SkySample(**fields)


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    def record(number: int, ok: bool, detail: str) -> None:
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
