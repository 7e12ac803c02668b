"""Pointed night-sky photon-count surveys.

Each survey row is one pointing of a photon counter.  Rows are normalised
to an efficiency-free photon rate and then averaged over azimuth at each
elevation, optionally skipping pointings close to the moon.
"""
from __future__ import annotations

import csv
import datetime as dt
import math
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import ConfigError, EmptyGroupError, InvalidArgument, OutOfRange
from .units import PhotonRate, SpectralBand

MOON_LABELS = ("new", "full")

SURVEY_HEADER = [
    "site_id", "timestamp_utc", "azimuth_deg", "elevation_deg", "band_center_nm",
    "band_fwhm_nm", "raw_counts", "integration_s", "detector_efficiency",
    "optics_efficiency", "dark_rate_hz", "moon_label", "fov_half_angle_deg",
]
SKYMAP_HEADER = ["azimuth_deg", "elevation_deg", "rate_hz", "rel_uncertainty"]
PROFILE_HEADER = ["elevation_deg", "mean_rate_hz", "std_rate_hz", "n_samples"]


@dataclass(frozen=True)
class SkySample:
    site_id: str
    timestamp_utc: dt.datetime
    azimuth_deg: float
    elevation_deg: float
    band: SpectralBand
    raw_counts: int
    integration_s: float
    detector_efficiency: float
    optics_efficiency: float
    dark_rate_hz: float
    moon_label: str
    fov_half_angle_deg: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.azimuth_deg < 360.0:
            raise OutOfRange(f"azimuth must lie in [0, 360), got {self.azimuth_deg}")
        if not 0.0 < self.elevation_deg <= 90.0:
            raise OutOfRange(f"elevation must lie in (0, 90], got {self.elevation_deg}")
        if self.raw_counts < 0:
            raise InvalidArgument(f"raw counts must be non-negative, got {self.raw_counts}")
        if not self.integration_s > 0:
            raise InvalidArgument(f"integration time must be positive, got {self.integration_s}")
        for name in ("detector_efficiency", "optics_efficiency"):
            v = getattr(self, name)
            if not 0.0 < v <= 1.0:
                raise InvalidArgument(f"{name} must lie in (0, 1], got {v}")
        if not self.dark_rate_hz >= 0:
            raise InvalidArgument(f"dark rate must be non-negative, got {self.dark_rate_hz}")
        if self.moon_label not in MOON_LABELS:
            raise InvalidArgument(f"moon label must be one of {MOON_LABELS}, got {self.moon_label!r}")
        if not self.fov_half_angle_deg > 0:
            raise InvalidArgument(f"field of view must be positive, got {self.fov_half_angle_deg}")


@dataclass(frozen=True)
class ExclusionCone:
    """Circular sky region (e.g. around the moon) dropped before averaging."""

    azimuth_deg: float
    elevation_deg: float
    radius_deg: float

    def contains(self, azimuth_deg: float, elevation_deg: float) -> bool:
        return angular_separation_deg(self.azimuth_deg, self.elevation_deg,
                                      azimuth_deg, elevation_deg) <= self.radius_deg


@dataclass(frozen=True)
class ProfileRow:
    elevation_deg: float
    mean_rate_hz: float
    std_rate_hz: float
    n_samples: int


@dataclass(frozen=True)
class ElevationProfile:
    site_id: str
    band: SpectralBand
    moon_label: str
    rows: tuple[ProfileRow, ...]

    def __post_init__(self) -> None:
        elevs = [r.elevation_deg for r in self.rows]
        if any(b <= a for a, b in zip(elevs, elevs[1:])):
            raise InvalidArgument("profile elevations must be strictly increasing")

    @property
    def elevations(self) -> list[float]:
        return [r.elevation_deg for r in self.rows]

    def rate_at(self, elevation_deg: float) -> PhotonRate:
        """Mean rate at a measured elevation; spread is reported as relative std."""
        for r in self.rows:
            if r.elevation_deg == elevation_deg:
                rel = r.std_rate_hz / r.mean_rate_hz if r.mean_rate_hz > 0 else 0.0
                return PhotonRate(r.mean_rate_hz, rel)
        raise OutOfRange(f"elevation {elevation_deg} was not measured (have {self.elevations})")


def angular_separation_deg(az1: float, el1: float, az2: float, el2: float) -> float:
    a1, e1, a2, e2 = map(math.radians, (az1, el1, az2, el2))
    cos_sep = math.sin(e1) * math.sin(e2) + math.cos(e1) * math.cos(e2) * math.cos(a1 - a2)
    return math.degrees(math.acos(min(1.0, max(-1.0, cos_sep))))


def normalize(sample: SkySample, detector_rel_uncertainty: float = 0.0,
              optics_rel_uncertainty: float = 0.0) -> PhotonRate:
    """Dark-subtracted, efficiency-corrected photon rate of one pointing.

    The dark-subtracted rate is floored at zero.  The relative uncertainty is
    the Poisson term ``1/sqrt(counts)`` combined in quadrature with any
    efficiency uncertainties supplied.
    """
    if not sample.integration_s > 0:
        raise InvalidArgument("integration time must be positive")
    eff = sample.detector_efficiency * sample.optics_efficiency
    if eff <= 0:
        raise InvalidArgument("efficiency must be positive")
    rate = max(0.0, sample.raw_counts / sample.integration_s - sample.dark_rate_hz) / eff
    poisson = 1.0 / math.sqrt(sample.raw_counts) if sample.raw_counts > 0 else 0.0
    rel = math.sqrt(poisson ** 2 + detector_rel_uncertainty ** 2 + optics_rel_uncertainty ** 2)
    return PhotonRate(rate, rel)


def dedupe(samples: Iterable[SkySample]) -> list[SkySample]:
    """Drop exact repeats of a measurement, keeping first occurrences."""
    return list(dict.fromkeys(samples))


def aggregate_by_elevation(
    samples: Sequence[SkySample],
    exclude: Iterable[ExclusionCone] = (),
) -> ElevationProfile:
    """Average normalised rates over azimuth at each elevation.

    Uses the sample standard deviation (n - 1); a lone sample has std 0.
    Exact duplicate rows count once.

    Raises
    ------
    EmptyGroupError
        If every sample at some elevation falls inside an exclusion cone.
    """
    if not samples:
        raise EmptyGroupError("no samples to aggregate")
    keys = {(s.site_id, s.band, s.moon_label) for s in samples}
    if len(keys) != 1:
        raise InvalidArgument(f"samples mix site/band/moon combinations: {sorted(map(str, keys))}")
    site_id, band, moon = keys.pop()
    exclude = list(exclude)
    samples = dedupe(samples)

    groups: dict[float, list[float]] = defaultdict(list)
    seen = set()
    for s in samples:
        seen.add(s.elevation_deg)
        if any(c.contains(s.azimuth_deg, s.elevation_deg) for c in exclude):
            continue
        groups[s.elevation_deg].append(normalize(s).hz)

    rows = []
    for elev in sorted(seen):
        rates = groups.get(elev)
        if not rates:
            raise EmptyGroupError(f"no samples left at elevation {elev:g} deg after exclusion")
        arr = np.sort(np.asarray(rates))  # sorted: summation order independent of input order
        std = float(np.std(arr, ddof=1)) if arr.size > 1 else 0.0
        rows.append(ProfileRow(elev, float(np.mean(arr)), std, int(arr.size)))
    return ElevationProfile(site_id, band, moon, tuple(rows))


def rescale_fov(rate: PhotonRate, from_half_angle_deg: float, to_half_angle_deg: float) -> PhotonRate:
    """Diffuse-background rate seen through a different field of view.

    Scales with the solid-angle ratio, ``(to / from)**2`` for small angles.
    """
    if not from_half_angle_deg > 0 or not to_half_angle_deg > 0:
        raise InvalidArgument("field-of-view half-angles must be positive")
    return PhotonRate(rate.hz * (to_half_angle_deg / from_half_angle_deg) ** 2, rate.rel_uncertainty)


def read_survey_csv(path: str | Path) -> list[SkySample]:
    """Parse a sky-survey CSV into validated samples."""
    path = Path(path)
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
    with fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != SURVEY_HEADER:
            raise ConfigError(f"{path}: expected header {','.join(SURVEY_HEADER)}, got {reader.fieldnames}")
        samples = []
        for lineno, row in enumerate(reader, start=2):
            try:
                counts = float(row["raw_counts"])
                if counts != int(counts):
                    raise InvalidArgument(f"raw_counts must be an integer, got {row['raw_counts']}")
                ts = row["timestamp_utc"].strip().replace("Z", "+00:00")
                samples.append(SkySample(
                    site_id=row["site_id"].strip(),
                    timestamp_utc=dt.datetime.fromisoformat(ts),
                    azimuth_deg=float(row["azimuth_deg"]) % 360.0,
                    elevation_deg=float(row["elevation_deg"]),
                    band=SpectralBand(float(row["band_center_nm"]), float(row["band_fwhm_nm"])),
                    raw_counts=int(counts),
                    integration_s=float(row["integration_s"]),
                    detector_efficiency=float(row["detector_efficiency"]),
                    optics_efficiency=float(row["optics_efficiency"]),
                    dark_rate_hz=float(row["dark_rate_hz"]),
                    moon_label=row["moon_label"].strip(),
                    fov_half_angle_deg=float(row["fov_half_angle_deg"]),
                ))
            except (ValueError, TypeError, InvalidArgument) as exc:
                raise ConfigError(f"{path}:{lineno}: {exc}") from exc
    return samples


def sky_map(samples: Iterable[SkySample]) -> list[tuple[float, float, float, float]]:
    """``(azimuth, elevation, rate, rel_uncertainty)`` rows in a fixed order."""
    rows = []
    for s in dedupe(samples):
        r = normalize(s)
        rows.append((s.azimuth_deg, s.elevation_deg, r.hz, r.rel_uncertainty))
    rows.sort(key=lambda t: (t[1], t[0], t[2]))
    return rows
