"""Independent reference computations used by the tests.

Nothing here imports the package's formulas: values come from mpmath at
30 digits, geometric root finding, or direct photon-level simulation.
"""
from __future__ import annotations

import numpy as np
from mpmath import asin, cos, findroot, mp, mpf, pi, sin, sqrt, tan

mp.dps = 30
H = mpf("6.62607015e-34")
C = mpf(299792458)


def photon_energy(nm):
    return H * C / (mpf(nm) * mpf("1e-9"))


def transmission(elev_deg, k="0.32"):
    return mpf(10) ** (-mpf(k) / sin(mp.radians(elev_deg)))


def eq1_rate(radiance_nw, nm, area, omega, e_atm):
    return mpf(e_atm) * mpf(area) * mpf(omega) * mpf(radiance_nw) * mpf("1e-5") / photon_energy(nm)


def eq2_radiance(rate, nm, phi, r, e_atm):
    return photon_energy(nm) * mpf(rate) / ((pi * mpf(phi) * mpf(r)) ** 2 * mpf(e_atm)) / mpf("1e-5")


def slant_range(altitude_m, elev_deg, earth_radius_m=6371000):
    """Walk along the line of sight until the orbit sphere is reached."""
    R, h, th = mpf(earth_radius_m), mpf(altitude_m), mp.radians(elev_deg)
    f = lambda d: sqrt((d * cos(th)) ** 2 + (R + d * sin(th)) ** 2) - (R + h)  # noqa: E731
    return findroot(f, mpf(altitude_m))


def rooftop_rate(roof_hz, elev_deg, phi, r_sat, r_f, na):
    alpha = asin(mpf(na))
    csc = 1 / sin(mp.radians(elev_deg))
    return transmission(elev_deg) * tan(mpf(phi)) ** 2 * csc * mpf(r_sat) ** 2 * mpf(roof_hz) / (alpha * mpf(r_f)) ** 2


def simulate_windows(rng, n_windows, mu_signal, mu_background, intrinsic=0.0):
    """Photon-by-photon simulation of gated detection windows.

    Each window receives Poisson(mu_signal) signal photons and
    Poisson(mu_background) background photons.  Signal photons are wrong
    with probability ``intrinsic``, background photons with probability 1/2.
    Returns (errors, detections).
    """
    n_sig = rng.poisson(mu_signal, n_windows)
    n_bg = rng.poisson(mu_background, n_windows)
    errors = rng.binomial(n_sig, intrinsic).sum() + rng.binomial(n_bg, 0.5).sum()
    return int(errors), int(n_sig.sum() + n_bg.sum())


def simulate_sparse_windows(rng, n_windows, mu_signal, mu_background, intrinsic=0.0, chunk=2_000_000):
    """Same process as :func:`simulate_windows` for very many, mostly empty windows.

    The number of occupied windows is drawn binomially; only those are
    simulated, from the zero-truncated Poisson photon count, with each
    photon independently signal or background.
    """
    mu = mu_signal + mu_background
    p_occupied = -np.expm1(-mu)
    occupied = int(rng.binomial(n_windows, p_occupied))
    # zero-truncated Poisson by inverse CDF
    k = np.arange(1, 40)
    logpmf = -mu + k * np.log(mu) - np.cumsum(np.log(k))
    cdf = np.cumsum(np.exp(logpmf)) / p_occupied
    cdf[-1] = 1.0
    errors = detections = 0
    left = occupied
    while left:
        n = min(left, chunk)
        photons = k[np.searchsorted(cdf, rng.random(n))]
        n_sig = rng.binomial(photons, mu_signal / mu)
        n_bg = photons - n_sig
        errors += int(rng.binomial(n_sig, intrinsic).sum() + rng.binomial(n_bg, 0.5).sum())
        detections += int(photons.sum())
        left -= n
    return errors, detections
