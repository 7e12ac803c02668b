"""Background-light budgets for satellite quantum links.

Converts ground and sky photon-count surveys and VIIRS night-light pixels
into background rates at a receiver, and turns those into QBER curves and
per-elevation viability verdicts.
"""
from .errors import (
    ConfigError,
    CoverageError,
    DegenerateGeometry,
    EmptyGroupError,
    ExtrapolationError,
    InvalidArgument,
    OutOfRange,
    QgsError,
    UndefinedQber,
)
from .linkgeom import (
    FiberProbe,
    LinkGeometry,
    atmospheric_transmission,
    detector_solid_angle,
    footprint_area,
    slant_distance,
    uplink_background_rate,
)
from .qber import (
    LossModel,
    ParametricLoss,
    QberPoint,
    SourceSpec,
    ViabilityVerdict,
    effective_background,
    qber,
    qber_curve,
    signal_rate,
    verdict,
)
from .skysurvey import (
    ElevationProfile,
    ExclusionCone,
    SkySample,
    aggregate_by_elevation,
    normalize,
    rescale_fov,
)
from .units import (
    PhotonEnergy,
    PhotonRate,
    Radiance,
    SpectralBand,
    photon_energy,
    radiance_to_rate,
    rate_to_radiance,
)
from .viirs import (
    AreaFractions,
    SpectralScaleFactor,
    ViirsPixel,
    band_scale,
    effective_footprint_radiance,
    illuminated_radiance,
    spectral_fraction_from_spectrum,
)

__version__ = "0.1.0"

__all__ = [
    "aggregate_by_elevation",
    "AreaFractions",
    "atmospheric_transmission",
    "band_scale",
    "ConfigError",
    "CoverageError",
    "DegenerateGeometry",
    "detector_solid_angle",
    "effective_background",
    "effective_footprint_radiance",
    "ElevationProfile",
    "EmptyGroupError",
    "ExclusionCone",
    "ExtrapolationError",
    "FiberProbe",
    "footprint_area",
    "illuminated_radiance",
    "InvalidArgument",
    "LinkGeometry",
    "LossModel",
    "normalize",
    "OutOfRange",
    "ParametricLoss",
    "photon_energy",
    "PhotonEnergy",
    "PhotonRate",
    "qber",
    "qber_curve",
    "QberPoint",
    "QgsError",
    "Radiance",
    "radiance_to_rate",
    "rate_to_radiance",
    "rescale_fov",
    "signal_rate",
    "SkySample",
    "slant_distance",
    "SourceSpec",
    "spectral_fraction_from_spectrum",
    "SpectralBand",
    "SpectralScaleFactor",
    "UndefinedQber",
    "uplink_background_rate",
    "verdict",
    "ViabilityVerdict",
    "ViirsPixel",
]
