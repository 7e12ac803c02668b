"""CSV outputs and the machine-readable site report.

The report is a JSON document.  Apart from ``generated_utc`` its bytes depend
only on the input files and configuration, so two runs can be diffed.
"""
from __future__ import annotations

import csv
import datetime as dt
import hashlib
import json
import os
from pathlib import Path
from typing import Any, Iterable, Sequence

from .config import Scenario, SiteConfig
from .pipeline import DownlinkResult, UplinkResult
from .qber import CURVE_HEADER, QberPoint, ViabilityVerdict, verdict
from .skysurvey import PROFILE_HEADER, SKYMAP_HEADER
from .units import quadrature

REPORT_FORMAT = "qgslight-report/1"
UPLINK_HEADER = ["method", "label", "elevation_deg", "rate_hz", "rate_lo_hz", "rate_hi_hz"]
THRESHOLD_ORDER = ("theoretical", "practical", "reference")


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    return path


def _fmt(value: Any) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _slug(*parts: str) -> str:
    return "_".join(p.replace(":", "-").replace("/", "-") for p in parts if p)


def write_uplink_outputs(out: Path, results: Sequence[UplinkResult]) -> list[Path]:
    written = []
    for res in results:
        rows = []
        for label, series in res.viirs.items():
            for e, r in zip(res.elevations, series):
                rows.append(["viirs", label, e, r.hz, r.hz * max(0.0, 1 - r.rel_uncertainty),
                             r.hz * (1 + r.rel_uncertainty)])
        for label, series in res.rooftop.items():
            for e, r in zip(res.elevations, series):
                rows.append(["rooftop", label, e, r.hz, r.hz * max(0.0, 1 - r.rel_uncertainty),
                             r.hz * (1 + r.rel_uncertainty)])
        written.append(write_csv(out / f"uplink_{_slug(res.scenario.name)}.csv", UPLINK_HEADER, rows))
        written.append(write_csv(out / f"qber_{_slug('uplink', res.scenario.name)}.csv",
                                 CURVE_HEADER, (p.as_row() for p in res.curve)))
    return written


def write_downlink_outputs(out: Path, results: Sequence[DownlinkResult]) -> list[Path]:
    written = []
    for res in results:
        stem = _slug(res.scenario.name, res.moon_label)
        written.append(write_csv(out / f"skymap_{stem}.csv", SKYMAP_HEADER, res.skymap))
        written.append(write_csv(
            out / f"profile_{stem}.csv", PROFILE_HEADER,
            ([r.elevation_deg, r.mean_rate_hz, r.std_rate_hz, r.n_samples] for r in res.profile.rows),
        ))
        written.append(write_csv(out / f"qber_{_slug('downlink', stem)}.csv", CURVE_HEADER,
                                 (p.as_row() for p in res.curve)))
    return written


def curve_to_json(curve: Sequence[QberPoint]) -> list[dict[str, float]]:
    return [dict(zip(CURVE_HEADER, p.as_row())) for p in curve]


def curve_from_json(rows: Sequence[dict[str, float]]) -> list[QberPoint]:
    return [
        QberPoint(r["elevation_deg"], r["signal_hz"], r["background_hz"],
                  r["effective_background_hz"], r["qber"], r["qber_lo"], r["qber_hi"], 0.0)
        for r in rows
    ]


def verdict_to_json(v: ViabilityVerdict) -> dict[str, Any]:
    return {
        "thresholds": dict(v.thresholds),
        "min_secure_elevation_deg": {k: v.min_secure_elevation_deg.get(k) for k in v.thresholds},
    }


def _elev(value: float | None) -> str:
    return "never" if value is None else f"{value:g} deg"


def summarize(direction: str, curve: Sequence[QberPoint], v: ViabilityVerdict) -> str:
    """One-line verdict in words."""
    lowest = min(p.elevation_deg for p in curve)
    ref = v.thresholds.get("reference")
    if direction == "downlink" and v.min_secure_elevation_deg.get("reference") == lowest:
        return f"viable (<{ref:.0%} above all measured elevations)"
    theo = v.min_secure_elevation_deg.get("theoretical")
    if theo is None:
        return f"not secure at any elevation (QBER >= {v.thresholds['theoretical']:.0%})"
    parts = [f"{_elev(v.min_secure_elevation_deg.get(k))} at {v.thresholds[k]:.0%}"
             for k in THRESHOLD_ORDER if k in v.thresholds]
    return f"secure above ~{theo:g} deg ({'; '.join(parts)})"


def _scenario_json(sc: Scenario) -> dict[str, Any]:
    return {
        "direction": sc.direction,
        "name": sc.name,
        "source": {
            "kind": sc.source.kind,
            "band_nm": sc.source.band.label(),
            "pulse_rate_hz": sc.source.pulse_rate_hz,
            "intrinsic_error": sc.source.intrinsic_error,
        },
        "coincidence_window_s": sc.window_s,
        "dark_rate_hz": sc.dark_rate_hz,
    }


def _rel(path: Path, base: Path) -> str:
    try:
        return os.path.relpath(path, base).replace(os.sep, "/")
    except ValueError:
        return str(path)


def build_report(
    cfg: SiteConfig,
    uplink: Sequence[UplinkResult],
    downlink: Sequence[DownlinkResult],
    not_assessed: Sequence[tuple[Scenario, str]] = (),
    generated_utc: str | None = None,
) -> dict[str, Any]:
    """Assemble the site report as plain JSON-ready data."""
    base = cfg.path.parent
    inputs = {
        role: {"path": _rel(p, base), "sha256": sha256(p)}
        for role, p in sorted(cfg.input_files().items())
        if p.exists()
    }
    scenarios = []
    notes = []
    for res in downlink:
        entry = _scenario_json(res.scenario)
        entry.update({
            "status": "assessed",
            "moon_label": res.moon_label,
            "loss_model": _rel(Path(res.scenario.loss_source), base)
            if not res.scenario.loss_source.startswith("parametric") else res.scenario.loss_source,
            "background": "azimuth-averaged survey profile",
            "profile": [
                {"elevation_deg": r.elevation_deg, "mean_rate_hz": r.mean_rate_hz,
                 "std_rate_hz": r.std_rate_hz, "n_samples": r.n_samples}
                for r in res.profile.rows
            ],
            "curve": curve_to_json(res.curve),
            "verdict": verdict_to_json(res.verdict),
            "summary": summarize("downlink", res.curve, res.verdict),
        })
        excl = res.scenario.exclusions.get(res.moon_label, ())
        if excl:
            notes.append(f"{res.scenario.key}/{res.moon_label}: {len(excl)} exclusion cone(s) applied before averaging")
        if res.scenario.rescale_fov_to_deg is not None:
            notes.append(f"{res.scenario.key}: background rescaled to {res.scenario.rescale_fov_to_deg:g} deg FOV")
        scenarios.append(entry)
    for res in uplink:
        entry = _scenario_json(res.scenario)
        worst = res.radiances[res.worst_date]
        entry.update({
            "status": "assessed",
            "loss_model": _rel(Path(res.scenario.loss_source), base)
            if not res.scenario.loss_source.startswith("parametric") else res.scenario.loss_source,
            "background": f"VIIRS pixel of {res.worst_date} (largest radiance)",
            "spectral_factor": {"fraction": res.factor.fraction,
                                "abs_uncertainty": res.factor.abs_uncertainty},
            "band_radiance_nw_cm2_sr": {d: r.value for d, r in res.radiances.items()},
            "band_radiance_rel_uncertainty": worst.rel_uncertainty,
            "zenith_rate_hz": {
                **{f"viirs/{d}": s[res.elevations.index(90.0)].hz
                   for d, s in res.viirs.items() if 90.0 in res.elevations},
                **{f"rooftop/{m}": s[res.elevations.index(90.0)].hz
                   for m, s in res.rooftop.items() if 90.0 in res.elevations},
            },
            "curve": curve_to_json(res.curve),
            "verdict": verdict_to_json(res.verdict),
            "summary": summarize("uplink", res.curve, res.verdict),
        })
        scenarios.append(entry)
    for sc, reason in not_assessed:
        entry = _scenario_json(sc)
        entry.update({"status": "not assessed", "reason": reason})
        scenarios.append(entry)
    scenarios.sort(key=lambda e: (e["direction"], e["name"], e.get("moon_label", "")))

    if uplink and cfg.fractions is not None:
        f = cfg.fractions
        u = uplink[0]
        notes.append(
            f"VIIRS scaling: / {f.viirs_illuminated:.4g} lit pixel share, x {f.receiver_illuminated:.4g} "
            f"lit footprint share, dark ground radiance 0"
        )
        chain = quadrature(f.rel_uncertainty, f.rel_uncertainty, u.factor.rel_uncertainty)
        notes.append(
            f"VIIRS scaling uncertainty (fractions and spectral factor, band {u.scenario.source.band.label()} nm): "
            f"{chain:.3f}; with pixel uncertainty: {u.radiances[u.worst_date].rel_uncertainty:.3f}"
        )

    return {
        "format": REPORT_FORMAT,
        "generated_utc": generated_utc,
        "site": {
            "id": cfg.site_id,
            "latitude_deg": cfg.latitude_deg,
            "longitude_deg": cfg.longitude_deg,
            "orbit_altitude_m": cfg.orbit_altitude_m,
            "r_receiver_m": cfg.r_receiver_m,
            "fov_half_angle_rad": cfg.fov_half_angle_rad,
            "extinction": cfg.extinction,
        },
        "grid_deg": {"lo": cfg.grid[0], "hi": cfg.grid[-1], "n": len(cfg.grid)},
        "inputs": inputs,
        "scenarios": scenarios,
        "notes": notes,
    }


def timestamp() -> str:
    """Report timestamp; honours ``SOURCE_DATE_EPOCH`` for reproducible builds."""
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    when = (dt.datetime.fromtimestamp(int(epoch), dt.timezone.utc) if epoch
            else dt.datetime.now(dt.timezone.utc))
    return when.replace(microsecond=0).isoformat()


def dumps(report: dict[str, Any]) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def body(report: dict[str, Any]) -> str:
    """Serialized report without the timestamp."""
    return dumps({k: v for k, v in report.items() if k != "generated_utc"})


def text_summary(report: dict[str, Any]) -> str:
    lines = [f"Site {report['site']['id']}"]
    for sc in report["scenarios"]:
        label = f"{sc['direction']}:{sc['name']}"
        if sc.get("moon_label"):
            label += f" ({sc['moon_label']} moon)"
        if sc["status"] == "assessed":
            lines.append(f"  {label}: {sc['summary']}")
        else:
            lines.append(f"  {label}: not assessed - {sc['reason']}")
    for note in report["notes"]:
        lines.append(f"  note: {note}")
    return "\n".join(lines) + "\n"


def recompute_verdicts(report: dict[str, Any]) -> dict[str, dict[str, float | None]]:
    """Verdicts rebuilt from the curves embedded in a parsed report."""
    out = {}
    for sc in report["scenarios"]:
        if sc["status"] != "assessed":
            continue
        key = f"{sc['direction']}:{sc['name']}/{sc.get('moon_label', '')}"
        v = verdict(curve_from_json(sc["curve"]), sc["verdict"]["thresholds"])
        out[key] = v.min_secure_elevation_deg
    return out
