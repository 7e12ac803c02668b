"""End-to-end uplink and downlink evaluations for one site."""
from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .config import Scenario, SiteConfig
from .errors import ConfigError, EmptyGroupError
from .qber import QberPoint, ViabilityVerdict, qber_curve, verdict
from .skysurvey import (
    ElevationProfile,
    ProfileRow,
    SkySample,
    aggregate_by_elevation,
    normalize,
    read_survey_csv,
    rescale_fov,
    sky_map,
)
from .units import PhotonRate, Radiance, SpectralBand, quadrature
from .uplink import Receiver, rooftop_series, viirs_series
from .viirs import (
    SpectralScaleFactor,
    factor_for_band,
    read_factor_csv,
    read_spectrum_csv,
    read_viirs_csv,
    scaled_pixel_radiance,
    spectral_fraction_from_spectrum,
)

log = logging.getLogger(__name__)


@dataclass
class UplinkResult:
    scenario: Scenario
    factor: SpectralScaleFactor
    elevations: list[float]
    # keyed by ISO date of the VIIRS pixel
    radiances: dict[str, Radiance]
    viirs: dict[str, list[PhotonRate]]
    worst_date: str
    # keyed by moon label of the rooftop measurements
    roof_rates: dict[str, PhotonRate] = field(default_factory=dict)
    rooftop: dict[str, list[PhotonRate]] = field(default_factory=dict)
    curve: list[QberPoint] = field(default_factory=list)
    verdict: ViabilityVerdict | None = None


@dataclass
class DownlinkResult:
    scenario: Scenario
    moon_label: str
    skymap: list[tuple[float, float, float, float]]
    profile: ElevationProfile
    curve: list[QberPoint]
    verdict: ViabilityVerdict


def receiver_from(cfg: SiteConfig) -> Receiver:
    if cfg.fov_half_angle_rad is None:
        raise ConfigError(
            f"{cfg.path}: [receiver] fov_half_angle_rad is required for uplink predictions; "
            "the receiver field of view has no published value, so it must be set explicitly"
        )
    return Receiver(cfg.orbit_altitude_m, cfg.r_receiver_m, cfg.fov_half_angle_rad, cfg.extinction)


def spectral_factor(cfg: SiteConfig, band: SpectralBand) -> SpectralScaleFactor:
    """Scale factor for ``band`` from the factor table, else from the spectrum."""
    if cfg.scale_factors is not None:
        return factor_for_band(read_factor_csv(cfg.scale_factors), band)
    if cfg.spectrum is not None:
        wl, inten = read_spectrum_csv(cfg.spectrum)
        return spectral_fraction_from_spectrum(wl, inten, band)
    raise ConfigError(f"{cfg.path}: [viirs] needs factors or spectrum for band scaling")


def roof_rates_by_moon(samples: Sequence[SkySample], band: SpectralBand,
                       lit_rel_uncertainty: float) -> dict[str, PhotonRate]:
    """Average rooftop rate per moon label, with spread and lit-area uncertainty."""
    groups: dict[str, list[float]] = defaultdict(list)
    for s in samples:
        if s.band == band:
            groups[s.moon_label].append(normalize(s).hz)
    out = {}
    for label in sorted(groups):
        arr = np.sort(np.asarray(groups[label]))
        mean = float(arr.mean())
        spread = float(arr.std(ddof=1)) / mean if arr.size > 1 and mean > 0 else 0.0
        out[label] = PhotonRate(mean, quadrature(spread / np.sqrt(arr.size), lit_rel_uncertainty))
    return out


def run_uplink(cfg: SiteConfig, viirs_path: Path | None = None, roof_path: Path | None = None,
               grid: Sequence[float] | None = None) -> list[UplinkResult]:
    receiver = receiver_from(cfg)
    viirs_path = viirs_path or cfg.viirs_pixels
    if viirs_path is None:
        raise ConfigError(f"{cfg.path}: no VIIRS pixel file configured")
    if cfg.fractions is None:
        raise ConfigError(f"{cfg.path}: [viirs] viirs_illuminated is required")
    pixels = sorted(read_viirs_csv(viirs_path), key=lambda p: (p.date_utc, p.value))
    roof_path = roof_path or cfg.roof_survey
    roof_samples = read_survey_csv(roof_path) if roof_path is not None else []
    if roof_samples and cfg.probe is None:
        raise ConfigError(f"{cfg.path}: rooftop data given but [probe] is not configured")
    elevations = list(grid or cfg.grid)
    scenarios = cfg.scenarios_for("uplink")
    if not scenarios:
        raise ConfigError(f"{cfg.path}: no [uplink:NAME] scenario configured")

    results = []
    for sc in scenarios:
        if sc.loss is None:
            raise ConfigError(f"{cfg.path}: [{sc.key}] {sc.problem}")
        factor = spectral_factor(cfg, sc.source.band)
        radiances: dict[str, Radiance] = {}
        series: dict[str, list[PhotonRate]] = {}
        for px in pixels:
            label = px.date_utc.isoformat()
            radiances[label] = scaled_pixel_radiance(px, cfg.fractions, factor)
            series[label] = viirs_series(radiances[label], receiver, elevations)
        worst = max(pixels, key=lambda p: (p.value, p.date_utc)).date_utc.isoformat()
        worst_series = dict(zip(elevations, series[worst]))
        curve = qber_curve(sc.source, sc.loss, lambda e: worst_series[e], sc.window_s,
                           elevations=elevations, dark_rate_hz=sc.dark_rate_hz)
        res = UplinkResult(sc, factor, elevations, radiances, series, worst,
                           curve=curve, verdict=verdict(curve, cfg.thresholds))
        if roof_samples:
            res.roof_rates = roof_rates_by_moon(roof_samples, sc.source.band,
                                                cfg.fractions.rel_uncertainty)
            for label, rate in res.roof_rates.items():
                res.rooftop[label] = rooftop_series(rate, cfg.probe, receiver, elevations,
                                                    cfg.fractions.receiver_illuminated)
            if not res.roof_rates:
                log.warning("rooftop data has no samples in band %s nm", sc.source.band.label())
        results.append(res)
    return results


def _rescaled(profile: ElevationProfile, from_deg: float, to_deg: float) -> ElevationProfile:
    rows = []
    for r in profile.rows:
        k = rescale_fov(PhotonRate(1.0), from_deg, to_deg).hz
        rows.append(ProfileRow(r.elevation_deg, r.mean_rate_hz * k, r.std_rate_hz * k, r.n_samples))
    return ElevationProfile(profile.site_id, profile.band, profile.moon_label, tuple(rows))


def run_downlink(cfg: SiteConfig, survey_path: Path | None = None,
                 scenario_names: Sequence[str] | None = None) -> list[DownlinkResult]:
    scenarios = cfg.scenarios_for("downlink")
    if scenario_names:
        scenarios = [s for s in scenarios if s.name in scenario_names]
    if not scenarios:
        raise ConfigError(f"{cfg.path}: no [downlink:NAME] scenario configured")
    results = []
    for sc in scenarios:
        path = survey_path or sc.survey
        if path is None:
            raise ConfigError(f"{cfg.path}: [{sc.key}] no survey file configured")
        if sc.loss is None:
            raise ConfigError(f"{cfg.path}: [{sc.key}] {sc.problem}")
        samples = read_survey_csv(path)
        if not samples:
            raise EmptyGroupError(f"{path}: survey contains no measurements")
        in_band = [s for s in samples if s.band == sc.source.band]
        if not in_band:
            found = sorted({s.band.label() for s in samples})
            raise ConfigError(
                f"{path}: no measurements in scenario band {sc.source.band.label()} nm; "
                f"bands found: {', '.join(found)}"
            )
        by_moon: dict[str, list[SkySample]] = defaultdict(list)
        for s in in_band:
            by_moon[s.moon_label].append(s)
        for label in sorted(by_moon):
            group = by_moon[label]
            profile = aggregate_by_elevation(group, sc.exclusions.get(label, ()))
            if sc.rescale_fov_to_deg is not None:
                fovs = {s.fov_half_angle_deg for s in group}
                if len(fovs) != 1:
                    raise ConfigError(f"{path}: cannot rescale a survey with mixed FOVs {sorted(fovs)}")
                profile = _rescaled(profile, fovs.pop(), sc.rescale_fov_to_deg)
            curve = qber_curve(sc.source, sc.loss, profile, sc.window_s,
                               dark_rate_hz=sc.dark_rate_hz)
            results.append(DownlinkResult(sc, label, sky_map(group), profile, curve,
                                          verdict(curve, cfg.thresholds)))
    return results
