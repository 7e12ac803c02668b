"""Signal link budget, gated background and QBER versus elevation."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigError, ExtrapolationError, InvalidArgument, OutOfRange, UndefinedQber
from .linkgeom import DEFAULT_EXTINCTION, atmospheric_transmission, slant_distance
from .skysurvey import ElevationProfile
from .units import PhotonRate, SpectralBand

SOURCE_KINDS = ("weak_coherent_pulse", "entangled_pair", "generic")
DEFAULT_WINDOW_S = 1e-9
LOSS_HEADER = ["elevation_deg", "loss_db"]
CURVE_HEADER = ["elevation_deg", "signal_hz", "background_hz", "effective_background_hz",
                "qber", "qber_lo", "qber_hi"]

# BB84 bound, practical limit for the mission, observed Micius-class downlink
THRESHOLDS = {"theoretical": 0.11, "practical": 0.05, "reference": 0.02}


@dataclass(frozen=True)
class SourceSpec:
    kind: str
    band: SpectralBand
    pulse_rate_hz: float
    intrinsic_error: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in SOURCE_KINDS:
            raise InvalidArgument(f"source kind must be one of {SOURCE_KINDS}, got {self.kind!r}")
        if not self.pulse_rate_hz > 0:
            raise InvalidArgument(f"pulse rate must be positive, got {self.pulse_rate_hz}")
        if not 0.0 <= self.intrinsic_error <= 0.5:
            raise InvalidArgument(f"intrinsic error must lie in [0, 0.5], got {self.intrinsic_error}")


@dataclass(frozen=True)
class ParametricLoss:
    """Zenith loss plus optional extinction and range terms.

    ``zenith_loss_db`` excludes atmospheric extinction; when ``atmosphere``
    is on, ``-10 log10(e_atm(theta))`` is added at every elevation.  The
    range term is ``20 log10(D(theta) / D(90))``.
    """

    zenith_loss_db: float
    atmosphere: bool = True
    geometric: bool = True
    orbit_altitude_m: float = 550e3
    extinction: float = DEFAULT_EXTINCTION

    def loss_db(self, elevation_deg: float) -> float:
        loss = self.zenith_loss_db
        if self.atmosphere:
            loss -= 10.0 * math.log10(atmospheric_transmission(elevation_deg, self.extinction))
        if self.geometric:
            ratio = slant_distance(self.orbit_altitude_m, elevation_deg) / self.orbit_altitude_m
            loss += 20.0 * math.log10(ratio)
        return loss


@dataclass(frozen=True)
class LossModel:
    """Channel loss as a function of elevation.

    ``mode`` is ``"table"`` (linear interpolation of ``table``, no
    extrapolation) or ``"parametric"``.
    """

    mode: str
    table: tuple[tuple[float, float], ...] = ()
    parametric: ParametricLoss | None = None

    def __post_init__(self) -> None:
        if self.mode == "table":
            if len(self.table) < 1:
                raise InvalidArgument("table loss model needs at least one row")
            elevs = [e for e, _ in self.table]
            if any(b <= a for a, b in zip(elevs, elevs[1:])):
                raise InvalidArgument("loss table elevations must be strictly increasing")
            if any(loss < 0 for _, loss in self.table):
                raise InvalidArgument("loss table values must be non-negative")
        elif self.mode == "parametric":
            if self.parametric is None:
                raise InvalidArgument("parametric loss model needs parameters")
        else:
            raise InvalidArgument(f"loss mode must be 'table' or 'parametric', got {self.mode!r}")

    @classmethod
    def flat(cls, loss_db: float) -> "LossModel":
        return cls("table", ((0.0, loss_db), (90.0, loss_db)))

    def loss_db(self, elevation_deg: float) -> float:
        if not 0.0 < elevation_deg <= 90.0:
            raise OutOfRange(f"elevation must lie in (0, 90], got {elevation_deg}")
        if self.mode == "parametric":
            return self.parametric.loss_db(elevation_deg)
        elevs = [e for e, _ in self.table]
        if not elevs[0] <= elevation_deg <= elevs[-1]:
            raise ExtrapolationError(
                f"elevation {elevation_deg:g} deg outside loss table range "
                f"[{elevs[0]:g}, {elevs[-1]:g}]"
            )
        return float(np.interp(elevation_deg, elevs, [loss for _, loss in self.table]))


@dataclass(frozen=True)
class QberPoint:
    elevation_deg: float
    signal_rate_hz: float
    background_rate_hz: float
    effective_background_hz: float
    qber: float
    qber_lo: float
    qber_hi: float
    rel_uncertainty: float

    def as_row(self) -> list[float]:
        return [self.elevation_deg, self.signal_rate_hz, self.background_rate_hz,
                self.effective_background_hz, self.qber, self.qber_lo, self.qber_hi]


@dataclass(frozen=True)
class ViabilityVerdict:
    thresholds: dict[str, float] = field(default_factory=lambda: dict(THRESHOLDS))
    # None means the threshold is never met
    min_secure_elevation_deg: dict[str, float | None] = field(default_factory=dict)

    def describe(self, name: str) -> str:
        elev = self.min_secure_elevation_deg.get(name)
        return "never" if elev is None else f"{elev:g}"


def signal_rate(source: SourceSpec, loss: LossModel, elevation_deg: float) -> PhotonRate:
    """Detected signal photons per second, ``pulse_rate * 10**(-loss/10)``."""
    return PhotonRate(source.pulse_rate_hz * 10.0 ** (-loss.loss_db(elevation_deg) / 10.0))


def effective_background(background: PhotonRate, source: SourceSpec,
                         coincidence_window_s: float = DEFAULT_WINDOW_S) -> PhotonRate:
    """Background surviving time gating, ``background * window * pulse_rate``."""
    if not coincidence_window_s > 0:
        raise InvalidArgument(f"coincidence window must be positive, got {coincidence_window_s}")
    duty = coincidence_window_s * source.pulse_rate_hz
    if duty > 1.0 + 1e-12:
        raise InvalidArgument(
            f"coincidence windows overlap: {coincidence_window_s:g} s x {source.pulse_rate_hz:g} Hz = {duty:g}"
        )
    return PhotonRate(background.hz * min(duty, 1.0), background.rel_uncertainty)


def qber(signal_hz: float, effective_background_hz: float, intrinsic_error: float = 0.0) -> float:
    """Error fraction when background clicks are wrong half the time.

    ``(e * S + B / 2) / (S + B)``
    """
    if signal_hz < 0 or effective_background_hz < 0:
        raise InvalidArgument("rates must be non-negative")
    if not 0.0 <= intrinsic_error <= 0.5:
        raise InvalidArgument(f"intrinsic error must lie in [0, 0.5], got {intrinsic_error}")
    total = signal_hz + effective_background_hz
    if total == 0:
        raise UndefinedQber("signal and background are both zero")
    return (intrinsic_error * signal_hz + 0.5 * effective_background_hz) / total


BackgroundSource = ElevationProfile | Callable[[float], PhotonRate]


def qber_curve(
    source: SourceSpec,
    loss: LossModel,
    background: BackgroundSource,
    window_s: float = DEFAULT_WINDOW_S,
    elevations: Sequence[float] | None = None,
    dark_rate_hz: float = 0.0,
) -> list[QberPoint]:
    """QBER at each elevation.

    ``background`` is either a measured :class:`ElevationProfile` (evaluated
    at its own elevations unless ``elevations`` is given) or a function of
    elevation returning a :class:`PhotonRate`.  Bounds come from evaluating
    the QBER at ``background * (1 -/+ u)``.  ``dark_rate_hz`` is added to the
    raw background before gating.
    """
    if isinstance(background, ElevationProfile):
        profile = background
        if elevations is None:
            elevations = profile.elevations
        lookup = profile.rate_at
    else:
        if elevations is None:
            raise InvalidArgument("elevation grid required when background is a function")
        lookup = background

    points = []
    for elev in elevations:
        bg = lookup(elev)
        raw = PhotonRate(bg.hz + dark_rate_hz, bg.rel_uncertainty)
        eff = effective_background(raw, source, window_s)
        sig = signal_rate(source, loss, elev).hz
        u = eff.rel_uncertainty
        q = qber(sig, eff.hz, source.intrinsic_error)
        lo_bg, hi_bg = eff.hz * max(0.0, 1.0 - u), eff.hz * (1.0 + u)
        q_lo = qber(sig, lo_bg, source.intrinsic_error) if sig + lo_bg > 0 else q
        q_hi = qber(sig, hi_bg, source.intrinsic_error)
        points.append(QberPoint(float(elev), sig, raw.hz, eff.hz, q,
                                min(q_lo, q_hi), max(q_lo, q_hi), u))
    return points


def verdict(curve: Sequence[QberPoint], thresholds: dict[str, float] | None = None) -> ViabilityVerdict:
    """Lowest elevation above which the central QBER stays under each threshold."""
    if not curve:
        raise InvalidArgument("cannot judge an empty curve")
    thresholds = dict(THRESHOLDS if thresholds is None else thresholds)
    ordered = sorted(curve, key=lambda p: p.elevation_deg, reverse=True)
    result: dict[str, float | None] = {}
    for name, limit in thresholds.items():
        lowest = None
        for p in ordered:
            if p.qber < limit:
                lowest = p.elevation_deg
            else:
                break
        result[name] = lowest
    return ViabilityVerdict(thresholds, result)


def read_loss_csv(path: str | Path) -> LossModel:
    path = Path(path)
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != LOSS_HEADER:
                raise ConfigError(f"{path}: expected header {','.join(LOSS_HEADER)}, got {reader.fieldnames}")
            rows = tuple((float(r["elevation_deg"]), float(r["loss_db"])) for r in reader)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    try:
        return LossModel("table", rows)
    except InvalidArgument as exc:
        raise ConfigError(f"{path}: {exc}") from exc
