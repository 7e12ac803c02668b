"""Unit-carrying scalars and radiance <-> photon-rate conversion.

External values use nanometres, nW cm^-2 sr^-1 and Hz.  Everything is
converted to SI before arithmetic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateGeometry, InvalidArgument

PLANCK = 6.62607015e-34  # J s (exact, SI 2019)
SPEED_OF_LIGHT = 299792458.0  # m/s (exact)

# 1 nW cm^-2 sr^-1 = 1e-9 W / 1e-4 m^2 / sr
NW_CM2_SR_TO_SI = 1e-5


def nw_cm2_sr_to_si(value: float) -> float:
    """nW cm^-2 sr^-1 -> W m^-2 sr^-1."""
    return value * NW_CM2_SR_TO_SI


def si_to_nw_cm2_sr(value: float) -> float:
    """W m^-2 sr^-1 -> nW cm^-2 sr^-1."""
    return value / NW_CM2_SR_TO_SI


def quadrature(*rel: float) -> float:
    """Combine independent relative uncertainties of a product or quotient."""
    return math.sqrt(sum(r * r for r in rel))


@dataclass(frozen=True)
class SpectralBand:
    """Filter passband given by its centre wavelength and FWHM in nm."""

    center_nm: float
    fwhm_nm: float

    def __post_init__(self) -> None:
        if not self.center_nm > 0:
            raise InvalidArgument(f"band centre must be positive, got {self.center_nm} nm")
        if not self.fwhm_nm > 0:
            raise InvalidArgument(f"band FWHM must be positive, got {self.fwhm_nm} nm")
        if not self.fwhm_nm < self.center_nm:
            raise InvalidArgument(
                f"band FWHM {self.fwhm_nm} nm must be narrower than its centre {self.center_nm} nm"
            )

    @property
    def lower_nm(self) -> float:
        return self.center_nm - self.fwhm_nm / 2.0

    @property
    def upper_nm(self) -> float:
        return self.center_nm + self.fwhm_nm / 2.0

    @classmethod
    def parse(cls, text: str) -> "SpectralBand":
        """Build a band from ``"CENTER:FWHM"`` (both in nm)."""
        try:
            center, fwhm = (float(part) for part in text.split(":"))
        except ValueError:
            raise InvalidArgument(f"band must look like CENTER:FWHM, got {text!r}") from None
        return cls(center, fwhm)

    def label(self) -> str:
        return f"{self.center_nm:g}:{self.fwhm_nm:g}"


# VIIRS day/night band, 500-900 nm
BROADBAND = SpectralBand(700.0, 400.0)


@dataclass(frozen=True)
class Radiance:
    """Band radiance in nW cm^-2 sr^-1 with a relative standard uncertainty."""

    value: float
    band: SpectralBand
    rel_uncertainty: float = 0.0

    def __post_init__(self) -> None:
        if not self.value >= 0:
            raise InvalidArgument(f"radiance must be non-negative, got {self.value}")
        if not self.rel_uncertainty >= 0:
            raise InvalidArgument(f"relative uncertainty must be non-negative, got {self.rel_uncertainty}")

    @property
    def si(self) -> float:
        """Radiance in W m^-2 sr^-1."""
        return nw_cm2_sr_to_si(self.value)

    def scaled(self, factor: float, rel_uncertainty: float = 0.0) -> "Radiance":
        """Multiply by an (uncertain) factor, keeping the band."""
        return Radiance(self.value * factor, self.band,
                        quadrature(self.rel_uncertainty, rel_uncertainty))


@dataclass(frozen=True)
class PhotonRate:
    hz: float
    rel_uncertainty: float = 0.0

    def __post_init__(self) -> None:
        if not self.hz >= 0:
            raise InvalidArgument(f"photon rate must be non-negative, got {self.hz} Hz")
        if not self.rel_uncertainty >= 0:
            raise InvalidArgument(f"relative uncertainty must be non-negative, got {self.rel_uncertainty}")

    @property
    def abs_uncertainty(self) -> float:
        return self.hz * self.rel_uncertainty


@dataclass(frozen=True)
class PhotonEnergy:
    joules: float

    def __post_init__(self) -> None:
        if not self.joules > 0:
            raise InvalidArgument(f"photon energy must be positive, got {self.joules} J")


def photon_energy(band: SpectralBand) -> PhotonEnergy:
    """Energy of one photon at the band centre, h c / lambda."""
    return PhotonEnergy(PLANCK * SPEED_OF_LIGHT / (band.center_nm * 1e-9))


def radiance_to_rate(
    radiance: Radiance,
    emitting_area_m2: float,
    solid_angle_sr: float,
    e_atm: float,
) -> PhotonRate:
    """Photon rate collected from an extended source.

    ``N = e_atm * A_g * Omega_d * L / E_lambda``.  Only the radiance
    uncertainty is propagated; geometry and transmission are taken as exact.

    Parameters
    ----------
    radiance : Radiance
        Source radiance; its band fixes the photon energy.
    emitting_area_m2 : float
        Area of the source seen by the detector, in m^2.
    solid_angle_sr : float
        Solid angle subtended by the detector aperture at the source.
    e_atm : float
        Transmission of the path, in [0, 1].
    """
    if not emitting_area_m2 >= 0:
        raise InvalidArgument(f"emitting area must be non-negative, got {emitting_area_m2}")
    if not solid_angle_sr >= 0:
        raise InvalidArgument(f"solid angle must be non-negative, got {solid_angle_sr}")
    if not 0.0 <= e_atm <= 1.0:
        raise InvalidArgument(f"transmission must lie in [0, 1], got {e_atm}")
    energy = photon_energy(radiance.band).joules
    hz = e_atm * emitting_area_m2 * solid_angle_sr * radiance.si / energy
    return PhotonRate(hz, radiance.rel_uncertainty)


def rate_to_radiance(
    rate: PhotonRate,
    band: SpectralBand,
    fov_half_angle_rad: float,
    r_detector_m: float,
    e_atm: float,
) -> Radiance:
    """Radiance implied by a detector count rate, ``L = E N / ((pi phi r)^2 e_atm)``.

    Raises
    ------
    DegenerateGeometry
        If the half-angle, detector radius or transmission is zero.
    """
    if fov_half_angle_rad < 0 or r_detector_m < 0 or not 0.0 <= e_atm <= 1.0:
        raise InvalidArgument(
            f"need phi >= 0, r >= 0 and 0 <= e_atm <= 1 "
            f"(got phi={fov_half_angle_rad}, r={r_detector_m}, e_atm={e_atm})"
        )
    denom = (math.pi * fov_half_angle_rad * r_detector_m) ** 2 * e_atm
    if denom == 0:
        raise DegenerateGeometry(
            f"degenerate detector geometry: phi={fov_half_angle_rad}, r={r_detector_m}, e_atm={e_atm}"
        )
    energy = photon_energy(band).joules
    return Radiance(si_to_nw_cm2_sr(energy * rate.hz / denom), band, rate.rel_uncertainty)
