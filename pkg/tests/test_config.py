from __future__ import annotations

import shutil

import pytest

from qgslight.config import load_config, parse_grid
from qgslight.errors import ConfigError, InvalidArgument

from .conftest import FIXTURES


@pytest.fixture
def site(tmp_path):
    """Writable copy of the fixture tree; returns a helper to edit one site file."""
    shutil.copytree(FIXTURES, tmp_path / "fx")

    def edit(name="waterloo", old=None, new=""):
        path = tmp_path / "fx" / name / "site.ini"
        if old is not None:
            text = path.read_text()
            assert old in text
            path.write_text(text.replace(old, new))
        return path
    return edit


def test_parse_grid():
    assert parse_grid("10:90:1") == [float(e) for e in range(10, 91)]
    assert parse_grid("10:20:2.5") == [10.0, 12.5, 15.0, 17.5, 20.0]
    for bad in ("10:90", "0:90:1", "50:40:1", "10:90:0", "a:b:c"):
        with pytest.raises(InvalidArgument):
            parse_grid(bad)


def test_load_waterloo():
    cfg = load_config(FIXTURES / "waterloo" / "site.ini")
    assert cfg.site_id == "QGS-UW"
    assert cfg.fractions.viirs_illuminated == pytest.approx(1 / 3)
    assert cfg.fractions.receiver_illuminated == 0.75
    assert cfg.probe.half_angle_rad == pytest.approx(0.221814470496794)
    assert cfg.grid[0] == 10.0 and cfg.grid[-1] == 90.0 and len(cfg.grid) == 81
    assert [s.key for s in cfg.scenarios_for("uplink")] == ["uplink:wcp780", "uplink:eps790"]
    down = cfg.scenarios_for("downlink")[0]
    assert down.source.pulse_rate_hz == 1e8
    assert down.exclusions["full"][0].azimuth_deg == 93.0
    assert down.loss.loss_db(90.0) == pytest.approx(38.2, abs=1e-3)
    assert set(cfg.input_files()) >= {"config", "viirs_pixels", "roof_survey", "downlink:qeyssat850:survey"}


def test_unknown_section(site):
    path = site(old="[grid]", new="[gird]")
    with pytest.raises(ConfigError, match="unknown section"):
        load_config(path)


def test_missing_file_and_bad_number(site, tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "nope.ini")
    path = site(old="viirs_illuminated = 1/3", new="viirs_illuminated = third")
    with pytest.raises(ConfigError, match="viirs_illuminated"):
        load_config(path)


def test_missing_loss_table_marks_scenario(site):
    path = site(old="loss_table = ../common/loss_downlink.csv", new="loss_table = gone.csv")
    cfg = load_config(path)
    sc = cfg.scenarios_for("downlink")[0]
    assert sc.loss is None and "gone.csv" in sc.problem


def test_parametric_loss(site):
    path = site(old="loss_table = ../common/loss_downlink.csv", new="loss_zenith_db = 35")
    sc = load_config(path).scenarios_for("downlink")[0]
    assert sc.loss.mode == "parametric"
    assert sc.loss.loss_db(90.0) == pytest.approx(38.2)


def test_bad_band(site):
    path = site(old="band = 850:10", new="band = 850")
    with pytest.raises(ConfigError):
        load_config(path)
