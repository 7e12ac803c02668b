"""Satellite-to-ground viewing geometry and clear-sky transmission."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateGeometry, InvalidArgument, OutOfRange
from .units import PhotonRate

EARTH_RADIUS_M = 6371e3
# Clear-sky extinction exponent; e_atm = 10**(-k * csc(elevation)).
DEFAULT_EXTINCTION = 0.32


def _check_elevation(elevation_deg: float) -> None:
    if not 0.0 < elevation_deg <= 90.0:
        raise OutOfRange(f"elevation must lie in (0, 90] degrees, got {elevation_deg}")


def csc_deg(elevation_deg: float) -> float:
    return 1.0 / math.sin(math.radians(elevation_deg))


@dataclass(frozen=True)
class LinkGeometry:
    """Receiver pointing at a ground site.

    Attributes
    ----------
    elevation_deg : float
        Satellite elevation above the site's horizon.
    distance_m : float
        Slant range between site and receiver.
    fov_half_angle_rad : float
        Receiver acceptance half-angle.
    r_receiver_m : float
        Receiver aperture radius.
    """

    elevation_deg: float
    distance_m: float
    fov_half_angle_rad: float
    r_receiver_m: float

    def __post_init__(self) -> None:
        _check_elevation(self.elevation_deg)
        for name in ("distance_m", "fov_half_angle_rad", "r_receiver_m"):
            if not getattr(self, name) > 0:
                raise InvalidArgument(f"{name} must be positive, got {getattr(self, name)}")


@dataclass(frozen=True)
class FiberProbe:
    """Bare multimode fibre used as a rooftop radiance probe."""

    core_radius_m: float
    half_angle_rad: float

    def __post_init__(self) -> None:
        if not self.core_radius_m > 0 or not self.half_angle_rad > 0:
            raise InvalidArgument(
                f"fibre core radius and half-angle must be positive "
                f"(got {self.core_radius_m}, {self.half_angle_rad})"
            )

    @classmethod
    def from_na(cls, core_radius_m: float, numerical_aperture: float) -> "FiberProbe":
        """Acceptance half-angle in air is ``arcsin(NA)``."""
        if not 0.0 < numerical_aperture < 1.0:
            raise InvalidArgument(f"numerical aperture must lie in (0, 1), got {numerical_aperture}")
        return cls(core_radius_m, math.asin(numerical_aperture))


def atmospheric_transmission(elevation_deg: float, extinction: float = DEFAULT_EXTINCTION) -> float:
    """Clear-sky transmission ``10**(-extinction * csc(elevation))``.

    >>> round(atmospheric_transmission(90.0), 5)
    0.47863
    """
    _check_elevation(elevation_deg)
    return 10.0 ** (-extinction * csc_deg(elevation_deg))


def footprint_area(geom: LinkGeometry) -> float:
    """Ground area inside the receiver field of view, ``pi (tan(phi) D)^2 csc(theta)``."""
    radius = math.tan(geom.fov_half_angle_rad) * geom.distance_m
    return math.pi * radius * radius * csc_deg(geom.elevation_deg)


def detector_solid_angle(r_receiver_m: float, distance_m: float) -> float:
    """Solid angle of the receiver aperture seen from the ground, ``pi (r/D)^2``."""
    if r_receiver_m < 0:
        raise InvalidArgument(f"receiver radius must be non-negative, got {r_receiver_m}")
    if not distance_m > 0:
        raise InvalidArgument(f"distance must be positive, got {distance_m}")
    return math.pi * (r_receiver_m / distance_m) ** 2


def uplink_background_rate(
    roof_rate: PhotonRate,
    probe: FiberProbe,
    geom: LinkGeometry,
    extinction: float = DEFAULT_EXTINCTION,
) -> PhotonRate:
    """Background rate at the satellite predicted from a rooftop fibre measurement.

    ``N_sat = 10**(-k csc th) tan(phi)^2 csc(th) r_sat^2 N_roof / (alpha r_f)^2``

    The distance cancels, so only the receiver half-angle and radius of
    ``geom`` matter besides the elevation.
    """
    denom = (probe.half_angle_rad * probe.core_radius_m) ** 2
    if denom == 0:
        raise DegenerateGeometry("fibre probe has zero acceptance")
    csc = csc_deg(geom.elevation_deg)
    hz = (
        atmospheric_transmission(geom.elevation_deg, extinction)
        * math.tan(geom.fov_half_angle_rad) ** 2
        * csc
        * geom.r_receiver_m ** 2
        * roof_rate.hz
        / denom
    )
    return PhotonRate(hz, roof_rate.rel_uncertainty)


def slant_distance(orbit_altitude_m: float, elevation_deg: float,
                   earth_radius_m: float = EARTH_RADIUS_M) -> float:
    """Range to a satellite at the given altitude over a spherical Earth."""
    if not orbit_altitude_m > 0:
        raise InvalidArgument(f"orbit altitude must be positive, got {orbit_altitude_m}")
    _check_elevation(elevation_deg)
    s = math.sin(math.radians(elevation_deg))
    re, h = earth_radius_m, orbit_altitude_m
    return math.sqrt(re * re * s * s + 2.0 * re * h + h * h) - re * s


def link_geometry(orbit_altitude_m: float, elevation_deg: float,
                  fov_half_angle_rad: float, r_receiver_m: float) -> LinkGeometry:
    """Geometry for a pass with the slant range filled in."""
    return LinkGeometry(
        elevation_deg,
        slant_distance(orbit_altitude_m, elevation_deg),
        fov_half_angle_rad,
        r_receiver_m,
    )
