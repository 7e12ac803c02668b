#!/usr/bin/env python3
"""Regenerate the synthetic fixture set under ``fixtures/``.

None of these files are field data.  Surveys are Poisson draws from a smooth
sky model (city glow, horizon brightening, a moon hot spot) whose levels
follow the ranges reported for the three ground stations; the rooftop set is
drawn around the radiance implied by the Waterloo VIIRS pixel; the spectrum is
built so its band shares reproduce the published scale factors; loss tables
are sampled from the parametric model with calibrated zenith losses.

Run from the repository root:  python scripts/make_fixtures.py
"""
from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np

from qgslight.linkgeom import FiberProbe
from qgslight.qber import ParametricLoss
from qgslight.skysurvey import SURVEY_HEADER, angular_separation_deg
from qgslight.units import SpectralBand, photon_energy
from qgslight.viirs import VIIRS_WINDOW_NM

ROOT = Path(__file__).resolve().parents[1] / "fixtures"
SEED = 20240704

# calibrated zenith losses (dB, atmosphere excluded); see README
DOWNLINK_ZENITH_DB = 35.0
UPLINK_ZENITH_DB = 44.0

AZIMUTHS = [0.0, 45.0, 90.0, 135.0, 180.0, 225.0, 270.0, 315.0]
CARDINALS = [0.0, 90.0, 180.0, 270.0]


def write(path: Path, header, rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def sky_rate(base, az, el, city_az, glow, horizon, moon=None):
    """Smooth sky model in Hz (efficiency-free)."""
    rate = base * (1 + glow * math.cos(math.radians(az - city_az)))
    rate *= 1 + horizon * (1 / math.sin(math.radians(el)) - 1)
    if moon is not None:
        m_az, m_el, amp, width = moon
        sep = angular_separation_deg(az, el, m_az, m_el)
        rate += amp * math.exp(-(sep / width) ** 2)
    return rate


def survey_rows(rng, site, pointings, bands, nights, integration, det_eff, opt_eff, dark, fov):
    rows = []
    for moon_label, stamp, band_base, city_az, glow, horizon, moon in nights:
        for center in bands:
            for az, el in pointings:
                true = sky_rate(band_base[center], az, el, city_az, glow, horizon, moon)
                mean_counts = (true * det_eff * opt_eff + dark) * integration
                counts = int(rng.poisson(mean_counts))
                rows.append([site, stamp, f"{az:g}", f"{el:g}", f"{center:g}", "10", counts,
                             f"{integration:g}", f"{det_eff:g}", f"{opt_eff:g}", f"{dark:g}",
                             moon_label, f"{fov:g}"])
    return rows


def make_surveys(rng) -> None:
    uw_points = [(az, el) for el in (45.0, 65.0, 85.0) for az in AZIMUTHS]
    uw_nights = [
        ("new", "2022-11-24T00:00:00Z", {780: 620.0, 790: 580.0, 850: 520.0}, 200.0, 0.18, 0.25, None),
        # full moon low in the east; the 90/45 pointing sits next to it
        ("full", "2023-02-07T01:00:00Z", {780: 520.0, 790: 480.0, 850: 430.0}, 200.0, 0.15, 0.20,
         (93.0, 43.0, 3100.0, 6.0)),
    ]
    write(ROOT / "waterloo" / "survey.csv", SURVEY_HEADER,
          survey_rows(rng, "QGS-UW", uw_points, (780, 790, 850), uw_nights, 5.0, 1.0, 1.0, 25.0, 0.010))

    uc_points = [(az, el) for el in (30.0, 45.0, 60.0) for az in AZIMUTHS] + [(az, 85.0) for az in CARDINALS]
    uc_nights = [
        ("new", "2023-03-20T03:40:00Z", {750: 160.0, 800: 190.0, 850: 230.0}, 110.0, 0.20, 0.45, None),
        ("full", "2023-02-08T06:15:00Z", {750: 150.0, 800: 180.0, 850: 210.0}, 110.0, 0.20, 0.40,
         (120.0, 14.0, 350.0, 20.0)),
    ]
    write(ROOT / "calgary" / "survey.csv", SURVEY_HEADER,
          survey_rows(rng, "QGS-UC", uc_points, (750, 800, 850), uc_nights, 30.0, 0.6, 0.5, 50.0, 0.008))

    rao_nights = [
        ("new", "2024-07-04T07:00:00Z", {750: 12.0, 800: 14.0, 850: 16.0}, 70.0, 0.25, 0.40, None),
        ("full", "2024-06-24T06:30:00Z", {750: 14.0, 800: 16.0, 850: 18.0}, 70.0, 0.25, 0.40,
         (150.0, 12.0, 40.0, 20.0)),
    ]
    write(ROOT / "rao" / "survey.csv", SURVEY_HEADER,
          survey_rows(rng, "QGS-RAO", uc_points, (750, 800, 850), rao_nights, 30.0, 0.6, 0.5, 50.0, 0.008))


def make_roof(rng) -> None:
    """Four rooftop spots looking down at the parking lot.

    Elevation holds the depression angle below the horizon.  Levels are the
    lit-ground radiance implied by the 2023-02-07 VIIRS pixel, perturbed per
    band and night; 850 nm new moon is the faintest set.
    """
    probe = FiberProbe.from_na(52.5e-6, 0.22)
    lit_radiance = 53.5 / (1 / 3)
    share = {780: 0.007, 790: 0.007, 850: 0.005}
    level = {("new", 780): 0.95, ("new", 790): 0.90, ("new", 850): 0.70,
             ("full", 780): 1.05, ("full", 790): 1.00, ("full", 850): 0.85}
    spots = [(200.0, 35.0, 1.10), (215.0, 50.0, 0.90), (240.0, 40.0, 1.05), (255.0, 55.0, 0.95)]
    stamps = {"new": "2022-11-24T00:10:00Z", "full": "2023-02-07T01:10:00Z"}
    half_angle_deg = math.degrees(probe.half_angle_rad)
    rows = []
    for moon in ("new", "full"):
        for center in (780, 790, 850):
            band = SpectralBand(center, 10)
            radiance_si = lit_radiance * share[center] * 1e-5
            hz = radiance_si * (math.pi * probe.half_angle_rad * probe.core_radius_m) ** 2 \
                / photon_energy(band).joules
            for az, dep, spot in spots:
                mean = (hz * level[moon, center] * spot + 25.0) * 5.0
                rows.append(["QGS-UW-roof", stamps[moon], f"{az:g}", f"{dep:g}", f"{center}", "10",
                             int(rng.poisson(mean)), "5", "1", "1", "25", moon, f"{half_angle_deg:.4f}"])
    write(ROOT / "waterloo" / "roof.csv", SURVEY_HEADER, rows)


def make_spectrum() -> None:
    """Street-lighting-like spectrum with band shares 0.7 %, 0.7 %, 0.5 %."""
    wl = np.arange(400.0, 951.0, 1.0)
    g = lambda mu, sigma: np.exp(-0.5 * ((wl - mu) / sigma) ** 2)  # noqa: E731
    base = (1.0 * g(450, 12) + 2.2 * g(580, 55) + 1.5 * g(589, 3) + 0.4 * g(819, 2)
            + np.where((wl > 690) & (wl < 910), 0.01, 0.0))
    parts = [g(777, 3), g(793, 3), g(852, 4)]
    bands = [SpectralBand(780, 10), SpectralBand(790, 10), SpectralBand(850, 10)]
    targets = [0.007, 0.007, 0.005]

    def integral(y, lo, hi):
        m = (wl >= lo) & (wl <= hi)
        return np.trapezoid(y[m], wl[m])

    lo, hi = VIIRS_WINDOW_NM
    # sum_j c_j (I_band(p_j) - t I_tot(p_j)) = t I_tot(base) - I_band(base)
    a = np.array([[integral(p, b.lower_nm, b.upper_nm) - t * integral(p, lo, hi) for p in parts]
                  for b, t in zip(bands, targets)])
    rhs = np.array([t * integral(base, lo, hi) - integral(base, b.lower_nm, b.upper_nm)
                    for b, t in zip(bands, targets)])
    coef = np.linalg.solve(a, rhs)
    assert np.all(coef > 0), coef
    y = base + sum(c * p for c, p in zip(coef, parts))
    write(ROOT / "common" / "spectrum_synthetic.csv", ["wavelength_nm", "intensity"],
          [[f"{w:g}", f"{v:.8e}"] for w, v in zip(wl, y)])


def make_tables() -> None:
    write(ROOT / "common" / "scale_factors.csv",
          ["band_center_nm", "band_fwhm_nm", "fraction", "abs_uncertainty"],
          [[780, 10, 0.007, 0.002], [790, 10, 0.007, 0.002], [850, 10, 0.005, 0.002]])
    elevs = list(range(10, 91, 5))
    for name, zenith in (("loss_downlink.csv", DOWNLINK_ZENITH_DB), ("loss_uplink.csv", UPLINK_ZENITH_DB)):
        model = ParametricLoss(zenith)
        write(ROOT / "common" / name, ["elevation_deg", "loss_db"],
              [[e, f"{model.loss_db(e):.3f}"] for e in elevs])
    write(ROOT / "waterloo" / "viirs.csv", ["site_id", "date_utc", "radiance_nw_cm2_sr", "rel_uncertainty"],
          [["QGS-UW", "2022-11-24", 37.7, 0.15], ["QGS-UW", "2023-02-07", 53.5, 0.15]])
    write(ROOT / "calgary" / "viirs.csv", ["site_id", "date_utc", "radiance_nw_cm2_sr", "rel_uncertainty"],
          [["QGS-UC", "2023-02-08", 104.7, 0.15], ["QGS-UC", "2023-03-20", 105.3, 0.15]])
    write(ROOT / "rao" / "viirs.csv", ["site_id", "date_utc", "radiance_nw_cm2_sr", "rel_uncertainty"],
          [["QGS-RAO", "2024-06-24", 3.4, 0.15], ["QGS-RAO", "2024-07-04", 2.9, 0.15]])


def main() -> None:
    rng = np.random.default_rng(SEED)
    make_tables()
    make_spectrum()
    make_surveys(rng)
    make_roof(rng)


if __name__ == "__main__":
    main()
