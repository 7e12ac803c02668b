"""Site configuration files.

A site file is INI text read with :mod:`configparser`.  Relative paths are
resolved against the directory holding the file.  Scenario sections are
named ``[downlink:NAME]`` and ``[uplink:NAME]``.
"""
from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .errors import ConfigError, InvalidArgument
from .linkgeom import DEFAULT_EXTINCTION, FiberProbe
from .qber import (
    DEFAULT_WINDOW_S,
    THRESHOLDS,
    LossModel,
    ParametricLoss,
    SourceSpec,
    read_loss_csv,
)
from .skysurvey import ExclusionCone
from .units import SpectralBand
from .viirs import AreaFractions, DEFAULT_FRACTION_UNCERTAINTY

DEFAULT_ORBIT_ALTITUDE_M = 550e3
DEFAULT_R_RECEIVER_M = 0.125
DEFAULT_GRID = (10.0, 90.0, 1.0)


def parse_grid(text: str) -> list[float]:
    """``"LO:HI:STEP"`` -> inclusive list of elevations."""
    try:
        lo, hi, step = (float(x) for x in text.split(":"))
    except ValueError:
        raise InvalidArgument(f"grid must look like LO:HI:STEP, got {text!r}") from None
    if not (0 < lo <= hi <= 90 and step > 0):
        raise InvalidArgument(f"grid needs 0 < LO <= HI <= 90 and STEP > 0, got {text!r}")
    n = int(round((hi - lo) / step))
    grid = [round(lo + i * step, 9) for i in range(n + 1)]
    return [g for g in grid if g <= hi + 1e-9]


def _number(text: str) -> float:
    # accepts "0.75" as well as "1/3"
    try:
        return float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        raise InvalidArgument(f"not a number: {text!r}") from None


def _cones(text: str) -> tuple[ExclusionCone, ...]:
    cones = []
    for chunk in filter(None, (c.strip() for c in text.split(","))):
        try:
            az, el, radius = (float(x) for x in chunk.split(":"))
        except ValueError:
            raise InvalidArgument(f"exclusion cone must look like AZ:EL:RADIUS, got {chunk!r}") from None
        cones.append(ExclusionCone(az, el, radius))
    return tuple(cones)


@dataclass(frozen=True)
class Scenario:
    name: str
    direction: str
    source: SourceSpec
    loss: LossModel | None
    window_s: float = DEFAULT_WINDOW_S
    dark_rate_hz: float = 0.0
    loss_source: str = ""
    survey: Path | None = None
    exclusions: dict[str, tuple[ExclusionCone, ...]] = field(default_factory=dict)
    rescale_fov_to_deg: float | None = None
    problem: str | None = None

    @property
    def key(self) -> str:
        return f"{self.direction}:{self.name}"


@dataclass(frozen=True)
class SiteConfig:
    path: Path
    site_id: str
    latitude_deg: float | None
    longitude_deg: float | None
    orbit_altitude_m: float
    r_receiver_m: float
    fov_half_angle_rad: float | None
    extinction: float
    probe: FiberProbe | None
    fractions: AreaFractions | None
    viirs_pixels: Path | None
    scale_factors: Path | None
    spectrum: Path | None
    roof_survey: Path | None
    thresholds: dict[str, float]
    grid: list[float]
    scenarios: tuple[Scenario, ...]

    def scenarios_for(self, direction: str) -> list[Scenario]:
        return [s for s in self.scenarios if s.direction == direction]

    def input_files(self) -> dict[str, Path]:
        """Every data file the configuration refers to, keyed by role."""
        files = {"config": self.path}
        for role in ("viirs_pixels", "scale_factors", "spectrum", "roof_survey"):
            p = getattr(self, role)
            if p is not None:
                files[role] = p
        for sc in self.scenarios:
            if sc.survey is not None:
                files[f"{sc.key}:survey"] = sc.survey
            if sc.loss_source and not sc.loss_source.startswith("parametric"):
                files[f"{sc.key}:loss_table"] = Path(sc.loss_source)
        return files


class _Reader:
    def __init__(self, parser: configparser.ConfigParser, base: Path, path: Path):
        self.parser, self.base, self.path = parser, base, path

    def get(self, section: str, key: str, default=None):
        if self.parser.has_option(section, key):
            value = self.parser.get(section, key).strip()
            return value if value != "" else default
        return default

    def number(self, section: str, key: str, default=None):
        value = self.get(section, key)
        if value is None:
            return default
        try:
            return _number(value)
        except InvalidArgument as exc:
            raise ConfigError(f"{self.path}: [{section}] {key}: {exc}") from None

    def file(self, section: str, key: str) -> Path | None:
        value = self.get(section, key)
        return None if value is None else (self.base / value)


def _loss_model(r: _Reader, section: str) -> tuple[LossModel | None, str, str | None]:
    table = r.file(section, "loss_table")
    if table is not None:
        if not table.exists():
            return None, str(table), f"loss table {table} not found"
        return read_loss_csv(table), str(table), None
    zenith = r.number(section, "loss_zenith_db")
    if zenith is not None:
        params = ParametricLoss(
            zenith,
            atmosphere=r.get(section, "loss_atmosphere", "yes").lower() in ("yes", "true", "1", "on"),
            geometric=r.get(section, "loss_geometric", "yes").lower() in ("yes", "true", "1", "on"),
            orbit_altitude_m=r.number("receiver", "orbit_altitude_m", DEFAULT_ORBIT_ALTITUDE_M),
            extinction=r.number("receiver", "extinction", DEFAULT_EXTINCTION),
        )
        return LossModel("parametric", parametric=params), f"parametric zenith={zenith:g} dB", None
    raise ConfigError(f"{r.path}: [{section}] needs loss_table or loss_zenith_db")


def _scenario(r: _Reader, section: str) -> Scenario:
    direction, _, name = section.partition(":")
    try:
        band_text = r.get(section, "band")
        if band_text is None:
            raise ConfigError(f"{r.path}: [{section}] band is required")
        source = SourceSpec(
            r.get(section, "source_kind", "generic"),
            SpectralBand.parse(band_text),
            r.number(section, "pulse_rate_hz"),
            r.number(section, "intrinsic_error", 0.0),
        )
    except (InvalidArgument, TypeError) as exc:
        raise ConfigError(f"{r.path}: [{section}] {exc}") from None
    loss, loss_source, problem = _loss_model(r, section)
    survey = r.file(section, "survey")
    if direction == "downlink":
        if survey is None:
            problem = problem or "no survey file configured"
        elif not survey.exists():
            problem = problem or f"survey {survey} not found"
    exclusions = {}
    for label in ("new", "full"):
        text = r.get(section, f"exclude_{label}")
        if text:
            try:
                exclusions[label] = _cones(text)
            except InvalidArgument as exc:
                raise ConfigError(f"{r.path}: [{section}] {exc}") from None
    return Scenario(
        name=name,
        direction=direction,
        source=source,
        loss=loss,
        window_s=r.number(section, "window_s", DEFAULT_WINDOW_S),
        dark_rate_hz=r.number(section, "dark_rate_hz", 0.0),
        loss_source=loss_source,
        survey=survey,
        exclusions=exclusions,
        rescale_fov_to_deg=r.number(section, "rescale_fov_to_deg"),
        problem=problem,
    )


def load_config(path: str | Path) -> SiteConfig:
    """Parse and validate a site file.

    Raises
    ------
    ConfigError
        On unreadable files, unknown sections or invalid values.
    """
    path = Path(path)
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"), interpolation=None)
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None
    r = _Reader(parser, path.parent, path)

    if not parser.has_section("site") or r.get("site", "id") is None:
        raise ConfigError(f"{path}: [site] id is required")
    known = {"site", "receiver", "probe", "viirs", "thresholds", "grid"}
    for section in parser.sections():
        if section not in known and section.partition(":")[0] not in ("downlink", "uplink"):
            raise ConfigError(f"{path}: unknown section [{section}]")

    probe = None
    if parser.has_section("probe"):
        try:
            probe = FiberProbe.from_na(r.number("probe", "core_radius_m"),
                                       r.number("probe", "numerical_aperture"))
        except (InvalidArgument, TypeError) as exc:
            raise ConfigError(f"{path}: [probe] {exc}") from None

    fractions = None
    if r.get("viirs", "viirs_illuminated") is not None:
        try:
            fractions = AreaFractions(
                r.number("viirs", "viirs_illuminated"),
                r.number("viirs", "receiver_illuminated", 1.0),
                r.number("viirs", "fraction_rel_uncertainty", DEFAULT_FRACTION_UNCERTAINTY),
            )
        except InvalidArgument as exc:
            raise ConfigError(f"{path}: [viirs] {exc}") from None

    thresholds = dict(THRESHOLDS)
    for name in THRESHOLDS:
        thresholds[name] = r.number("thresholds", name, THRESHOLDS[name])

    try:
        grid = parse_grid(r.get("grid", "elevations", "10:90:1"))
    except InvalidArgument as exc:
        raise ConfigError(f"{path}: [grid] {exc}") from None

    fov = r.number("receiver", "fov_half_angle_rad")
    if fov is not None and not fov > 0:
        raise ConfigError(f"{path}: [receiver] fov_half_angle_rad must be positive")

    scenarios = tuple(
        _scenario(r, s) for s in parser.sections() if s.partition(":")[0] in ("downlink", "uplink")
    )
    return SiteConfig(
        path=path,
        site_id=r.get("site", "id"),
        latitude_deg=r.number("site", "latitude_deg"),
        longitude_deg=r.number("site", "longitude_deg"),
        orbit_altitude_m=r.number("receiver", "orbit_altitude_m", DEFAULT_ORBIT_ALTITUDE_M),
        r_receiver_m=r.number("receiver", "r_receiver_m", DEFAULT_R_RECEIVER_M),
        fov_half_angle_rad=fov,
        extinction=r.number("receiver", "extinction", DEFAULT_EXTINCTION),
        probe=probe,
        fractions=fractions,
        viirs_pixels=r.file("viirs", "pixels"),
        scale_factors=r.file("viirs", "factors"),
        spectrum=r.file("viirs", "spectrum"),
        roof_survey=r.file("viirs", "roof_survey"),
        thresholds=thresholds,
        grid=grid,
        scenarios=scenarios,
    )
