from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qgslight.errors import DegenerateGeometry, InvalidArgument
from qgslight.units import (
    BROADBAND,
    PhotonRate,
    Radiance,
    SpectralBand,
    nw_cm2_sr_to_si,
    photon_energy,
    quadrature,
    radiance_to_rate,
    rate_to_radiance,
    si_to_nw_cm2_sr,
)

from . import oracles

B780 = SpectralBand(780, 10)
B850 = SpectralBand(850, 10)


@pytest.mark.parametrize("nm", [780, 790, 850, 500.5])
def test_photon_energy_matches_high_precision(nm):
    assert photon_energy(SpectralBand(nm, 10)).joules == pytest.approx(float(oracles.photon_energy(nm)), rel=1e-14)


def test_photon_energy_frozen_values():
    assert photon_energy(B850).joules == pytest.approx(2.33699512605756e-19, rel=1e-13)
    assert photon_energy(B780).joules == pytest.approx(2.54672545788324e-19, rel=1e-13)


def test_unit_conversion_is_exact_for_one():
    assert nw_cm2_sr_to_si(1.0) == 1e-5
    assert si_to_nw_cm2_sr(nw_cm2_sr_to_si(1.0)) == 1.0


def test_band_parse_and_label():
    band = SpectralBand.parse("780:10")
    assert band == B780
    assert (band.lower_nm, band.upper_nm) == (775.0, 785.0)
    assert band.label() == "780:10"
    assert BROADBAND.lower_nm == 500.0 and BROADBAND.upper_nm == 900.0


@pytest.mark.parametrize("text", ["780", "780:x", "a:b:c", ""])
def test_band_parse_rejects_garbage(text):
    with pytest.raises(InvalidArgument):
        SpectralBand.parse(text)


@pytest.mark.parametrize("center,fwhm", [(0, 10), (780, 0), (10, 20)])
def test_band_rejects_bad_values(center, fwhm):
    with pytest.raises(InvalidArgument):
        SpectralBand(center, fwhm)


def test_negative_radiance_and_rate_rejected():
    with pytest.raises(InvalidArgument):
        Radiance(-1.0, B780)
    with pytest.raises(InvalidArgument):
        PhotonRate(-1.0)


def test_radiance_to_rate_scaled_waterloo_pixel():
    # 53.5 / (1/3) * 3/4 * 0.007 = 0.842625 at zenith, 550 km, phi 1.818e-4 rad, r 0.125 m
    area = math.pi * (math.tan(1.818e-4) * 550e3) ** 2
    omega = math.pi * (0.125 / 550e3) ** 2
    e = 10 ** -0.32
    rate = radiance_to_rate(Radiance(0.842625, B780), area, omega, e)
    expected = float(oracles.eq1_rate("0.842625", 780, area, omega, e))
    assert rate.hz == pytest.approx(expected, rel=1e-12)
    assert rate.hz == pytest.approx(80716.0218, rel=1e-8)


def test_radiance_to_rate_unscaled_pixel():
    area = math.pi * (math.tan(1.818e-4) * 550e3) ** 2
    omega = math.pi * (0.125 / 550e3) ** 2
    rate = radiance_to_rate(Radiance(53.5, B780, 0.15), area, omega, 10 ** -0.32)
    assert rate.hz == pytest.approx(5124826.78, rel=1e-8)
    assert rate.rel_uncertainty == 0.15


def test_rate_to_radiance_fibre_probe():
    rad = rate_to_radiance(PhotonRate(1000.0), B780, 0.2218, 52.5e-6, 1.0)
    assert rad.value == pytest.approx(0.0190300834982285, rel=1e-12)
    alpha = math.asin(0.22)
    rad = rate_to_radiance(PhotonRate(1000.0), B780, alpha, 52.5e-6, 1.0)
    assert rad.value == pytest.approx(float(oracles.eq2_radiance(1000, 780, alpha, 52.5e-6, 1)), rel=1e-12)


@pytest.mark.parametrize("phi,r,e", [(0.0, 1e-3, 1.0), (0.1, 0.0, 1.0), (0.1, 1e-3, 0.0)])
def test_rate_to_radiance_degenerate(phi, r, e):
    with pytest.raises(DegenerateGeometry):
        rate_to_radiance(PhotonRate(1.0), B780, phi, r, e)
    # also usable as a ZeroDivisionError
    with pytest.raises(ZeroDivisionError):
        rate_to_radiance(PhotonRate(1.0), B780, phi, r, e)


def test_radiance_to_rate_rejects_bad_transmission():
    with pytest.raises(InvalidArgument):
        radiance_to_rate(Radiance(1.0, B780), 1.0, 1.0, 1.5)


def test_quadrature():
    assert quadrature(0.2, 0.2, 2 / 7) == pytest.approx(math.sqrt(0.08 + 4 / 49))
    assert quadrature() == 0.0


positive = st.floats(1e-6, 1e6, allow_nan=False, allow_infinity=False)
bands = st.builds(SpectralBand, st.floats(300, 1200), st.floats(1, 50))


@given(L=positive, band=bands, phi=st.floats(1e-6, 0.5), r=st.floats(1e-7, 1.0), e=st.floats(1e-3, 1.0))
def test_roundtrip_rate_radiance_rate(L, band, phi, r, e):
    # area * omega for a detector of half-angle phi and radius r is (pi phi r)^2
    area_omega = (math.pi * phi * r) ** 2
    rate = radiance_to_rate(Radiance(L, band), area_omega, 1.0, e)
    back = rate_to_radiance(rate, band, phi, r, e)
    assert back.value == pytest.approx(L, rel=1e-10)


@given(L=positive, area=positive, omega=positive, e=st.floats(1e-3, 0.5), k=st.floats(1e-3, 2.0))
def test_radiance_to_rate_is_linear_in_each_input(L, area, omega, e, k):
    base = radiance_to_rate(Radiance(L, B850), area, omega, e).hz
    assert radiance_to_rate(Radiance(k * L, B850), area, omega, e).hz == pytest.approx(k * base, rel=1e-12)
    assert radiance_to_rate(Radiance(L, B850), k * area, omega, e).hz == pytest.approx(k * base, rel=1e-12)
    assert radiance_to_rate(Radiance(L, B850), area, k * omega, e).hz == pytest.approx(k * base, rel=1e-12)
    assert radiance_to_rate(Radiance(L, B850), area, omega, k * e).hz == pytest.approx(k * base, rel=1e-12)


@given(a=st.floats(100, 2000), b=st.floats(100, 2000))
def test_photon_energy_decreases_with_wavelength(a, b):
    if a == b:
        return
    lo, hi = sorted((a, b))
    assert photon_energy(SpectralBand(lo, 10)).joules > photon_energy(SpectralBand(hi, 10)).joules


def test_vectorised_roundtrip_many_cases():
    rng = np.random.default_rng(1)
    L = 10 ** rng.uniform(-3, 3, 10_000)
    phi = 10 ** rng.uniform(-6, -1, 10_000)
    r = 10 ** rng.uniform(-6, 0, 10_000)
    e = rng.uniform(1e-3, 1, 10_000)
    for i in range(0, 10_000, 97):
        band = SpectralBand(780, 10)
        rate = radiance_to_rate(Radiance(L[i], band), (math.pi * phi[i] * r[i]) ** 2, 1.0, e[i])
        assert rate_to_radiance(rate, band, phi[i], r[i], e[i]).value == pytest.approx(L[i], rel=1e-10)
