"""Rescaling VIIRS day/night-band pixels to a quantum-channel band and footprint.

A VIIRS DNB pixel reports the mean radiance of a 500 m x 500 m cell over
500-900 nm.  Three scalar corrections take it to what a narrow-band receiver
with a smaller footprint would see:

1. divide by the illuminated fraction of the pixel (dark ground taken as 0),
2. multiply by the illuminated fraction of the receiver footprint,
3. multiply by the fraction of the broadband signal falling inside the band.

All three are plain multiplications so their order does not matter.
"""
from __future__ import annotations

import csv
import datetime as dt
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import ConfigError, CoverageError, DegenerateGeometry, InvalidArgument
from .units import BROADBAND, Radiance, SpectralBand, quadrature

VIIRS_WINDOW_NM = (500.0, 900.0)
DEFAULT_PIXEL_UNCERTAINTY = 0.15
DEFAULT_FRACTION_UNCERTAINTY = 0.20
DEFAULT_FACTOR_UNCERTAINTY = 0.002

VIIRS_HEADER = ["site_id", "date_utc", "radiance_nw_cm2_sr", "rel_uncertainty"]
SPECTRUM_HEADER = ["wavelength_nm", "intensity"]
FACTOR_HEADER = ["band_center_nm", "band_fwhm_nm", "fraction", "abs_uncertainty"]


@dataclass(frozen=True)
class ViirsPixel:
    site_id: str
    date_utc: dt.date
    value: float
    rel_uncertainty: float = DEFAULT_PIXEL_UNCERTAINTY

    def __post_init__(self) -> None:
        if not self.value >= 0:
            raise InvalidArgument(f"VIIRS radiance must be non-negative, got {self.value}")
        if not self.rel_uncertainty >= 0:
            raise InvalidArgument(f"relative uncertainty must be non-negative, got {self.rel_uncertainty}")

    @property
    def radiance(self) -> Radiance:
        return Radiance(self.value, BROADBAND, self.rel_uncertainty)


@dataclass(frozen=True)
class SpectralScaleFactor:
    """Share of the 500-900 nm signal that falls inside ``band``."""

    band: SpectralBand
    fraction: float
    abs_uncertainty: float = DEFAULT_FACTOR_UNCERTAINTY

    def __post_init__(self) -> None:
        if not 0.0 <= self.fraction <= 1.0:
            raise InvalidArgument(f"spectral fraction must lie in [0, 1], got {self.fraction}")
        if not 0.0 <= self.abs_uncertainty:
            raise InvalidArgument(f"uncertainty must be non-negative, got {self.abs_uncertainty}")
        # "stays >= 0" is read as: the lower bound may touch but not cross zero
        if self.fraction - self.abs_uncertainty < -1e-15 and self.fraction > 0:
            raise InvalidArgument(
                f"fraction {self.fraction} +/- {self.abs_uncertainty} would go negative"
            )

    @property
    def rel_uncertainty(self) -> float:
        return self.abs_uncertainty / self.fraction if self.fraction > 0 else 0.0


@dataclass(frozen=True)
class AreaFractions:
    """Illuminated share of the VIIRS pixel and of the receiver footprint."""

    viirs_illuminated: float
    receiver_illuminated: float
    rel_uncertainty: float = DEFAULT_FRACTION_UNCERTAINTY

    def __post_init__(self) -> None:
        for name in ("viirs_illuminated", "receiver_illuminated"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise InvalidArgument(f"{name} must lie in (0, 1], got {v}")
        if not self.receiver_illuminated > 0:
            raise InvalidArgument("receiver_illuminated must be positive")
        if not self.rel_uncertainty >= 0:
            raise InvalidArgument(f"relative uncertainty must be non-negative, got {self.rel_uncertainty}")


def illuminated_radiance(pixel: ViirsPixel | Radiance, fractions: AreaFractions) -> Radiance:
    """Radiance of the lit part of the pixel, ``L_VIIRS / A_ill``."""
    radiance = pixel.radiance if isinstance(pixel, ViirsPixel) else pixel
    if fractions.viirs_illuminated == 0:
        raise DegenerateGeometry("VIIRS pixel has no illuminated area")
    return radiance.scaled(1.0 / fractions.viirs_illuminated, fractions.rel_uncertainty)


def effective_footprint_radiance(lit: Radiance, fractions: AreaFractions) -> Radiance:
    """Average radiance over a receiver footprint that is only partly lit."""
    return lit.scaled(fractions.receiver_illuminated, fractions.rel_uncertainty)


def band_scale(radiance: Radiance, factor: SpectralScaleFactor) -> Radiance:
    """Keep only the share of a broadband radiance inside ``factor.band``."""
    if radiance.band != BROADBAND:
        raise InvalidArgument(
            f"band scaling applies to broadband VIIRS radiance, got band {radiance.band.label()} nm"
        )
    return Radiance(
        radiance.value * factor.fraction,
        factor.band,
        quadrature(radiance.rel_uncertainty, factor.rel_uncertainty),
    )


def scaled_pixel_radiance(pixel: ViirsPixel, fractions: AreaFractions,
                          factor: SpectralScaleFactor) -> Radiance:
    """Full chain: pixel -> lit-area radiance -> footprint average -> band."""
    lit = illuminated_radiance(pixel, fractions)
    return band_scale(effective_footprint_radiance(lit, fractions), factor)


def _trapezoid_between(wl: np.ndarray, y: np.ndarray, lo: float, hi: float) -> float:
    # clip to [lo, hi], inserting interpolated end points
    inner = (wl > lo) & (wl < hi)
    xs = np.concatenate(([lo], wl[inner], [hi]))
    ys = np.concatenate(([np.interp(lo, wl, y)], y[inner], [np.interp(hi, wl, y)]))
    return float(np.trapezoid(ys, xs))


def spectral_fraction_from_spectrum(
    wavelength_nm: Sequence[float],
    intensity: Sequence[float],
    band: SpectralBand,
    abs_uncertainty: float = DEFAULT_FACTOR_UNCERTAINTY,
) -> SpectralScaleFactor:
    """Band share of a sampled emission spectrum.

    Ratio of the trapezoidal integral over the band's FWHM window to the
    integral over 500-900 nm.  Samples are linearly interpolated at the
    window edges.

    Raises
    ------
    CoverageError
        If the samples do not span both the band and 500-900 nm.
    DegenerateGeometry
        If the 500-900 nm integral is zero.
    """
    wl = np.asarray(wavelength_nm, dtype=float)
    y = np.asarray(intensity, dtype=float)
    if wl.ndim != 1 or wl.shape != y.shape or wl.size < 2:
        raise InvalidArgument("spectrum needs matching 1-D wavelength and intensity arrays")
    if np.any(np.diff(wl) <= 0):
        raise InvalidArgument("spectrum wavelengths must be strictly increasing")
    if np.any(y < 0):
        raise InvalidArgument("spectrum intensities must be non-negative")
    lo, hi = VIIRS_WINDOW_NM
    for need_lo, need_hi, what in ((lo, hi, "500-900 nm window"),
                                   (band.lower_nm, band.upper_nm, f"band {band.label()} nm")):
        if wl[0] > need_lo or wl[-1] < need_hi:
            raise CoverageError(
                f"spectrum spans {wl[0]:g}-{wl[-1]:g} nm and does not cover the {what}"
            )
    total = _trapezoid_between(wl, y, lo, hi)
    if total == 0:
        raise DegenerateGeometry("spectrum integrates to zero over 500-900 nm")
    fraction = _trapezoid_between(wl, y, band.lower_nm, band.upper_nm) / total
    fraction = min(max(fraction, 0.0), 1.0)
    return SpectralScaleFactor(band, fraction, min(abs_uncertainty, fraction) if fraction else 0.0)


def _read_rows(path: Path, header: list[str]) -> list[dict[str, str]]:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != header:
                raise ConfigError(f"{path}: expected header {','.join(header)}, got {reader.fieldnames}")
            return list(reader)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc


def read_viirs_csv(path: str | Path) -> list[ViirsPixel]:
    rows = _read_rows(Path(path), VIIRS_HEADER)
    pixels = []
    for lineno, row in enumerate(rows, start=2):
        try:
            unc = row["rel_uncertainty"].strip()
            pixels.append(ViirsPixel(
                row["site_id"].strip(),
                dt.date.fromisoformat(row["date_utc"].strip()),
                float(row["radiance_nw_cm2_sr"]),
                float(unc) if unc else DEFAULT_PIXEL_UNCERTAINTY,
            ))
        except (ValueError, InvalidArgument) as exc:
            raise ConfigError(f"{path}:{lineno}: {exc}") from exc
    if not pixels:
        raise ConfigError(f"{path}: no VIIRS pixels")
    return pixels


def read_spectrum_csv(path: str | Path) -> tuple[np.ndarray, np.ndarray]:
    rows = _read_rows(Path(path), SPECTRUM_HEADER)
    try:
        data = np.array([[float(r["wavelength_nm"]), float(r["intensity"])] for r in rows])
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    if data.size == 0:
        raise ConfigError(f"{path}: empty spectrum")
    return data[:, 0], data[:, 1]


def read_factor_csv(path: str | Path) -> list[SpectralScaleFactor]:
    rows = _read_rows(Path(path), FACTOR_HEADER)
    try:
        return [
            SpectralScaleFactor(
                SpectralBand(float(r["band_center_nm"]), float(r["band_fwhm_nm"])),
                float(r["fraction"]),
                float(r["abs_uncertainty"]),
            )
            for r in rows
        ]
    except (ValueError, InvalidArgument) as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def factor_for_band(factors: Iterable[SpectralScaleFactor], band: SpectralBand) -> SpectralScaleFactor:
    factors = list(factors)
    for f in factors:
        if f.band == band:
            return f
    known = ", ".join(f.band.label() for f in factors) or "none"
    raise ConfigError(f"no spectral scale factor for band {band.label()} nm (have: {known})")
