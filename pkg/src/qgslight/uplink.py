"""Background photon rate at an orbiting receiver looking down at a site.

Two estimates are produced over an elevation grid:

* the VIIRS route scales a satellite pixel to the band and footprint and
  pushes the radiance through the photon-count relation;
* the rooftop route feeds a fibre measurement of the ground straight into
  the closed-form rooftop expression.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .linkgeom import (
    DEFAULT_EXTINCTION,
    FiberProbe,
    atmospheric_transmission,
    detector_solid_angle,
    footprint_area,
    link_geometry,
    uplink_background_rate,
)
from .units import PhotonRate, Radiance, radiance_to_rate


@dataclass(frozen=True)
class Receiver:
    orbit_altitude_m: float
    r_receiver_m: float
    fov_half_angle_rad: float
    extinction: float = DEFAULT_EXTINCTION


def viirs_rate(radiance: Radiance, receiver: Receiver, elevation_deg: float) -> PhotonRate:
    """Photons/s from ground of uniform ``radiance`` reaching the receiver."""
    geom = link_geometry(receiver.orbit_altitude_m, elevation_deg,
                         receiver.fov_half_angle_rad, receiver.r_receiver_m)
    return radiance_to_rate(
        radiance,
        footprint_area(geom),
        detector_solid_angle(geom.r_receiver_m, geom.distance_m),
        atmospheric_transmission(elevation_deg, receiver.extinction),
    )


def rooftop_rate(roof_rate: PhotonRate, probe: FiberProbe, receiver: Receiver,
                 elevation_deg: float, lit_fraction: float = 1.0) -> PhotonRate:
    """Rooftop estimate, optionally diluted by the lit share of the footprint.

    The rooftop probe only sees lit ground, so ``lit_fraction`` plays the
    same role as the receiver-footprint fraction on the VIIRS route.
    """
    geom = link_geometry(receiver.orbit_altitude_m, elevation_deg,
                         receiver.fov_half_angle_rad, receiver.r_receiver_m)
    rate = uplink_background_rate(roof_rate, probe, geom, receiver.extinction)
    return PhotonRate(rate.hz * lit_fraction, rate.rel_uncertainty)


def viirs_series(radiance: Radiance, receiver: Receiver,
                 elevations: Sequence[float]) -> list[PhotonRate]:
    return [viirs_rate(radiance, receiver, e) for e in elevations]


def rooftop_series(roof_rate: PhotonRate, probe: FiberProbe, receiver: Receiver,
                   elevations: Sequence[float], lit_fraction: float = 1.0) -> list[PhotonRate]:
    return [rooftop_rate(roof_rate, probe, receiver, e, lit_fraction) for e in elevations]
