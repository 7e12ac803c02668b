"""Command-line entry point: ``qgslight {convert,uplink,downlink,report}``.

Exit status is 0 on success, 1 when a computation fails and 2 for usage or
configuration errors.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Sequence

from . import plotting, report
from .config import SiteConfig, load_config, parse_grid
from .errors import ConfigError, InvalidArgument, QgsError
from .linkgeom import (
    DEFAULT_EXTINCTION,
    atmospheric_transmission,
    detector_solid_angle,
    footprint_area,
    link_geometry,
)
from .pipeline import DownlinkResult, UplinkResult, run_downlink, run_uplink
from .units import PhotonRate, Radiance, SpectralBand, radiance_to_rate, rate_to_radiance

log = logging.getLogger("qgslight")

EXIT_OK, EXIT_COMPUTE, EXIT_USAGE = 0, 1, 2


def _geometry(text: str) -> dict[str, float]:
    out = {}
    for item in filter(None, (p.strip() for p in text.split(","))):
        key, sep, value = item.partition("=")
        if not sep:
            raise argparse.ArgumentTypeError(f"geometry item {item!r} is not KEY=VALUE")
        try:
            out[key.strip()] = float(value)
        except ValueError:
            raise argparse.ArgumentTypeError(f"geometry value {value!r} is not a number") from None
    return out


def _grid(text: str) -> list[float]:
    try:
        return parse_grid(text)
    except InvalidArgument as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _band(text: str) -> SpectralBand:
    try:
        return SpectralBand.parse(text)
    except InvalidArgument as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qgslight",
        description="Light-pollution background and QBER estimates for satellite quantum links.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    conv = sub.add_parser("convert", help="radiance <-> photon rate and transmission")
    conv.add_argument("--e-atm", type=float, metavar="ELEV_DEG",
                      help="print clear-sky transmission at this elevation")
    conv.add_argument("--radiance", type=float, metavar="NW_CM2_SR",
                      help="radiance to convert into a photon rate")
    conv.add_argument("--rate", type=float, metavar="HZ", help="photon rate to convert into radiance")
    conv.add_argument("--band", type=_band, metavar="CENTER:FWHM", help="band in nm, e.g. 780:10")
    conv.add_argument(
        "--geometry", type=_geometry, metavar="K=V,...",
        help="radiance->rate: elevation,altitude,fov,r (orbit geometry) or area,solid_angle; "
             "rate->radiance: fov,r (detector half-angle and radius)",
    )
    conv.add_argument("--transmission", type=float, help="path transmission (default: from elevation, else 1)")
    conv.add_argument("--rel-uncertainty", type=float, default=0.0)
    conv.add_argument("--extinction", type=float, default=DEFAULT_EXTINCTION)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", type=Path, required=True, metavar="PATH")
        p.add_argument("--out", type=Path, default=Path("out"), metavar="DIR")
        p.add_argument("--no-figures", action="store_true", help="skip PNG figures")

    up = sub.add_parser("uplink", help="background at the satellite receiver and uplink QBER")
    common(up)
    up.add_argument("--viirs", type=Path, help="VIIRS pixel CSV (default: from config)")
    up.add_argument("--roof", type=Path, help="rooftop survey CSV (default: from config)")
    up.add_argument("--grid", type=_grid, metavar="LO:HI:STEP")

    down = sub.add_parser("downlink", help="sky-survey profile and downlink QBER")
    common(down)
    down.add_argument("--survey", type=Path, help="sky-survey CSV (default: from config)")

    rep = sub.add_parser("report", help="all scenarios plus a site report")
    common(rep)
    rep.add_argument("--grid", type=_grid, metavar="LO:HI:STEP")
    return parser


def cmd_convert(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    modes = [m for m in ("e_atm", "radiance", "rate") if getattr(args, m) is not None]
    if len(modes) != 1:
        parser.error("convert needs exactly one of --e-atm, --radiance, --rate")
    mode = modes[0]
    if mode == "e_atm":
        print(f"{atmospheric_transmission(args.e_atm, args.extinction):.5f}")
        return EXIT_OK
    if args.band is None:
        parser.error(f"--band is required with --{mode}")
    if args.geometry is None:
        parser.error(f"--geometry is required with --{mode}")
    g = args.geometry
    if mode == "radiance":
        radiance = Radiance(args.radiance, args.band, args.rel_uncertainty)
        if {"area", "solid_angle"} <= g.keys():
            area, omega = g["area"], g["solid_angle"]
            t = 1.0 if args.transmission is None else args.transmission
        elif {"elevation", "fov", "r"} <= g.keys():
            geom = link_geometry(g.get("altitude", 550e3), g["elevation"], g["fov"], g["r"])
            area = footprint_area(geom)
            omega = detector_solid_angle(geom.r_receiver_m, geom.distance_m)
            t = (atmospheric_transmission(g["elevation"], args.extinction)
                 if args.transmission is None else args.transmission)
        else:
            parser.error("--geometry needs area,solid_angle or elevation,fov,r[,altitude]")
        rate = radiance_to_rate(radiance, area, omega, t)
        print(f"{rate.hz:.6g} +/- {rate.abs_uncertainty:.2g} Hz")
        return EXIT_OK
    if not {"fov", "r"} <= g.keys():
        parser.error("--geometry needs fov,r with --rate")
    t = 1.0 if args.transmission is None else args.transmission
    rad = rate_to_radiance(PhotonRate(args.rate, args.rel_uncertainty), args.band, g["fov"], g["r"], t)
    print(f"{rad.value:.6g} +/- {rad.value * rad.rel_uncertainty:.2g} nW/cm^2/sr")
    return EXIT_OK


def _uplink_figures(out: Path, results: Sequence[UplinkResult], cfg: SiteConfig) -> None:
    for res in results:
        plotting.plot_uplink(res, out / f"uplink_{report._slug(res.scenario.name)}.png")
    if results:
        plotting.plot_qber([(r.scenario.name, r.curve) for r in results], cfg.thresholds,
                           out / "qber_uplink.png", f"{cfg.site_id} uplink")


def _downlink_figures(out: Path, results: Sequence[DownlinkResult], cfg: SiteConfig) -> None:
    for res in results:
        plotting.plot_sky_map(res, out / f"skymap_{report._slug(res.scenario.name, res.moon_label)}.png")
    if results:
        plotting.plot_qber([(f"{r.scenario.name} ({r.moon_label} moon)", r.curve) for r in results],
                           cfg.thresholds, out / "qber_downlink.png", f"{cfg.site_id} downlink")


def cmd_uplink(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    results = run_uplink(cfg, args.viirs, args.roof, args.grid)
    report.write_uplink_outputs(args.out, results)
    if not args.no_figures:
        _uplink_figures(args.out, results, cfg)
    for res in results:
        print(f"uplink:{res.scenario.name}: {report.summarize('uplink', res.curve, res.verdict)}")
    return EXIT_OK


def cmd_downlink(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    results = run_downlink(cfg, args.survey)
    report.write_downlink_outputs(args.out, results)
    if not args.no_figures:
        _downlink_figures(args.out, results, cfg)
    for res in results:
        print(f"downlink:{res.scenario.name} ({res.moon_label} moon): "
              f"{report.summarize('downlink', res.curve, res.verdict)}")
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    not_assessed = []
    downlink: list[DownlinkResult] = []
    for sc in cfg.scenarios_for("downlink"):
        if sc.problem:
            not_assessed.append((sc, sc.problem))
            continue
        try:
            downlink.extend(run_downlink(cfg, scenario_names=[sc.name]))
        except QgsError as exc:
            not_assessed.append((sc, str(exc)))
    uplink: list[UplinkResult] = []
    up_scenarios = cfg.scenarios_for("uplink")
    if up_scenarios:
        try:
            uplink = run_uplink(cfg, grid=args.grid)
        except QgsError as exc:
            not_assessed.extend((sc, str(exc)) for sc in up_scenarios)
    for sc, reason in not_assessed:
        log.warning("%s not assessed: %s", sc.key, reason)
    if not downlink and not uplink:
        raise ConfigError(f"{cfg.path}: no scenario could be assessed")

    doc = report.build_report(cfg, uplink, downlink, not_assessed, report.timestamp())
    args.out.mkdir(parents=True, exist_ok=True)
    (args.out / "report.json").write_text(report.dumps(doc), encoding="utf-8")
    summary = report.text_summary(doc)
    (args.out / "report.txt").write_text(summary, encoding="utf-8")
    report.write_uplink_outputs(args.out, uplink)
    report.write_downlink_outputs(args.out, downlink)
    if not args.no_figures:
        _uplink_figures(args.out, uplink, cfg)
        _downlink_figures(args.out, downlink, cfg)
    sys.stdout.write(summary)
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        if args.command == "convert":
            return cmd_convert(args, parser)
        return {"uplink": cmd_uplink, "downlink": cmd_downlink, "report": cmd_report}[args.command](args)
    except ConfigError as exc:
        print(f"qgslight: configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except QgsError as exc:
        print(f"qgslight: error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
