from __future__ import annotations

import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qgslight.errors import ConfigError, EmptyGroupError, InvalidArgument, OutOfRange
from qgslight.skysurvey import (
    ExclusionCone,
    aggregate_by_elevation,
    angular_separation_deg,
    dedupe,
    normalize,
    read_survey_csv,
    rescale_fov,
    sky_map,
)
from qgslight.units import PhotonRate, SpectralBand

from .conftest import FIXTURES, make_sample


def test_normalize_example():
    s = make_sample(raw_counts=30000, integration_s=30.0, detector_efficiency=0.6,
                    optics_efficiency=0.5, dark_rate_hz=50.0)
    r = normalize(s)
    assert r.hz == pytest.approx((1000 - 50) / 0.3, rel=1e-14)
    assert r.rel_uncertainty == pytest.approx(1 / math.sqrt(30000), rel=1e-14)


def test_normalize_floors_at_zero():
    assert normalize(make_sample(raw_counts=10, integration_s=1.0, dark_rate_hz=50.0)).hz == 0.0


def test_normalize_zero_counts():
    r = normalize(make_sample(raw_counts=0))
    assert r.hz == 0.0 and r.rel_uncertainty == 0.0


def test_normalize_adds_efficiency_uncertainty():
    r = normalize(make_sample(raw_counts=10000), 0.03, 0.04)
    assert r.rel_uncertainty == pytest.approx(math.sqrt(0.01 ** 2 + 0.03 ** 2 + 0.04 ** 2))


@pytest.mark.parametrize("field,value,exc", [
    ("azimuth_deg", 360.0, OutOfRange),
    ("elevation_deg", 0.0, OutOfRange),
    ("raw_counts", -1, InvalidArgument),
    ("integration_s", 0.0, InvalidArgument),
    ("detector_efficiency", 0.0, InvalidArgument),
    ("optics_efficiency", 1.5, InvalidArgument),
    ("moon_label", "half", InvalidArgument),
])
def test_sample_validation(field, value, exc):
    with pytest.raises(exc):
        make_sample(**{field: value})


def _ring(elev, rates, **kw):
    return [make_sample(azimuth_deg=float(45 * i), elevation_deg=elev,
                        raw_counts=int(r * 30), **kw) for i, r in enumerate(rates)]


def test_aggregate_mean_and_sample_std():
    samples = _ring(45.0, [900, 1000, 1100]) + _ring(65.0, [500])
    profile = aggregate_by_elevation(samples)
    assert profile.elevations == [45.0, 65.0]
    row = profile.rows[0]
    assert row.mean_rate_hz == pytest.approx(1000.0)
    assert row.std_rate_hz == pytest.approx(100.0)
    assert row.n_samples == 3
    assert profile.rows[1].std_rate_hz == 0.0
    rate = profile.rate_at(45.0)
    assert (rate.hz, rate.rel_uncertainty) == (pytest.approx(1000.0), pytest.approx(0.1))


def test_rate_at_unmeasured_elevation():
    with pytest.raises(OutOfRange):
        aggregate_by_elevation(_ring(45.0, [1, 2])).rate_at(50.0)


def test_exclusion_cone_drops_moon_sample():
    samples = _ring(45.0, [900, 1000, 5000])
    cone = ExclusionCone(90.0, 45.0, 5.0)
    assert cone.contains(90.0, 45.0)
    assert not cone.contains(0.0, 45.0)
    profile = aggregate_by_elevation(samples, [cone])
    assert profile.rows[0].mean_rate_hz == pytest.approx(950.0)


def test_exclusion_emptying_an_elevation_raises_and_names_it():
    samples = _ring(45.0, [900]) + _ring(65.0, [800])
    with pytest.raises(EmptyGroupError, match="65"):
        aggregate_by_elevation(samples, [ExclusionCone(0.0, 65.0, 1.0)])


def test_aggregate_rejects_mixed_groups_and_empty():
    mixed = _ring(45.0, [1]) + _ring(45.0, [1], band=SpectralBand(780, 10))
    with pytest.raises(InvalidArgument):
        aggregate_by_elevation(mixed)
    with pytest.raises(EmptyGroupError):
        aggregate_by_elevation([])


def test_duplicated_survey_gives_identical_profile_and_map():
    samples = _ring(45.0, [900, 1000, 1100]) + _ring(65.0, [700, 750])
    assert aggregate_by_elevation(samples + samples) == aggregate_by_elevation(samples)
    assert sky_map(samples + samples) == sky_map(samples)
    assert dedupe(samples + samples) == samples


def test_angular_separation():
    assert angular_separation_deg(0, 90, 123, 90) == pytest.approx(0.0, abs=1e-6)
    assert angular_separation_deg(0, 0, 90, 0) == pytest.approx(90.0)
    assert angular_separation_deg(10, 30, 10, 50) == pytest.approx(20.0)


def test_rescale_fov_solid_angle_ratio():
    r = rescale_fov(PhotonRate(100.0, 0.1), 0.008, 0.016)
    assert r.hz == pytest.approx(400.0) and r.rel_uncertainty == 0.1
    with pytest.raises(InvalidArgument):
        rescale_fov(PhotonRate(1.0), 0.0, 1.0)


def test_read_survey_rejects_bad_rows(tmp_path):
    header = (FIXTURES / "waterloo" / "survey.csv").read_text().splitlines()[0]
    p = tmp_path / "s.csv"
    p.write_text(header + "\nX,2023-01-01T00:00:00Z,0,45,850,10,12.5,5,1,1,0,new,0.01\n")
    with pytest.raises(ConfigError, match=":2"):
        read_survey_csv(p)
    p.write_text("a,b\n1,2\n")
    with pytest.raises(ConfigError, match="expected header"):
        read_survey_csv(p)


def test_waterloo_fixture_levels():
    samples = [s for s in read_survey_csv(FIXTURES / "waterloo" / "survey.csv")]
    rates = [(s, normalize(s).hz) for s in samples]
    moon = ExclusionCone(93.0, 43.0, 10.0)
    far = [r for s, r in rates if not (s.moon_label == "full" and moon.contains(s.azimuth_deg, s.elevation_deg))]
    near = [r for s, r in rates if s.moon_label == "full" and moon.contains(s.azimuth_deg, s.elevation_deg)]
    # typical sky 300-1000 Hz; next to the full moon up to just under 4000 Hz
    assert np.median(far) > 300 and np.median(far) < 1000
    assert np.mean([300 <= r <= 1000 for r in far]) >= 0.9
    assert near and 3000 < max(near) < 4000


counts = st.lists(st.integers(0, 10**6), min_size=1, max_size=12)


@given(c=counts, seed=st.integers(0, 2**32 - 1))
def test_aggregate_invariant_under_reordering(c, seed):
    samples = [make_sample(azimuth_deg=float(i * 360 / len(c)), elevation_deg=float(30 + 15 * (i % 3)),
                           raw_counts=n) for i, n in enumerate(c)]
    shuffled = list(np.random.default_rng(seed).permutation(len(samples)))
    other = [samples[i] for i in shuffled]
    a, b = aggregate_by_elevation(samples), aggregate_by_elevation(other)
    assert a == b
    assert all(r.std_rate_hz >= 0 and r.mean_rate_hz >= 0 for r in a.rows)


@given(n1=st.integers(0, 10**6), n2=st.integers(0, 10**6), dark=st.floats(0, 1e3),
       e1=st.floats(0.01, 1.0), e2=st.floats(0.01, 1.0))
def test_normalize_monotone(n1, n2, dark, e1, e2):
    lo, hi = sorted((n1, n2))
    assert normalize(make_sample(raw_counts=lo, dark_rate_hz=dark)).hz <= \
        normalize(make_sample(raw_counts=hi, dark_rate_hz=dark)).hz
    elo, ehi = sorted((e1, e2))
    s = make_sample(raw_counts=hi, dark_rate_hz=dark)
    assert normalize(dataclasses.replace(s, detector_efficiency=ehi)).hz <= \
        normalize(dataclasses.replace(s, detector_efficiency=elo)).hz
    assert normalize(dataclasses.replace(s, optics_efficiency=ehi)).hz <= \
        normalize(dataclasses.replace(s, optics_efficiency=elo)).hz
