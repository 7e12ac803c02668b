"""Figures written next to the CSV outputs."""
from __future__ import annotations

import math
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .pipeline import DownlinkResult, UplinkResult  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 7,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "savefig.dpi": 150,
}

THRESHOLD_STYLE = {"theoretical": ":", "practical": "--", "reference": "-."}


def figsize(scale: float = 1.0) -> tuple[float, float]:
    width = 6.0 * scale
    return width, width * (math.sqrt(5.0) - 1.0) / 2.0


def save(fig, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    # drop the Software tag so reruns produce identical files
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return path


def plot_uplink(res: UplinkResult, path: Path) -> Path:
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=figsize())
        e = res.elevations
        for label, series in res.viirs.items():
            hz = [r.hz for r in series]
            u = series[0].rel_uncertainty
            line, = ax.plot(e, hz, color="tab:red", lw=1,
                            alpha=1.0 if label == res.worst_date else 0.5,
                            label=f"VIIRS {label}")
            ax.fill_between(e, [h * (1 - u) for h in hz], [h * (1 + u) for h in hz],
                            color=line.get_color(), alpha=0.12, lw=0)
        for label, series in res.rooftop.items():
            ax.plot(e, [r.hz for r in series], color="tab:blue",
                    ls="-" if label == "new" else "--", lw=1, label=f"rooftop, {label} moon")
        ax.set_xlabel("satellite elevation (deg)")
        ax.set_ylabel("background at receiver (photons/s)")
        ax.set_title(f"{res.scenario.name}: {res.scenario.source.band.label()} nm", fontsize=9)
        ax.legend(loc="best")
        return save(fig, path)


def plot_qber(curves: Sequence[tuple[str, Sequence]], thresholds: dict[str, float],
              path: Path, title: str = "") -> Path:
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=figsize())
        for label, curve in curves:
            e = [p.elevation_deg for p in curve]
            line, = ax.plot(e, [100 * p.qber for p in curve], marker="o" if len(e) < 15 else None,
                            ms=3, lw=1, label=label)
            ax.fill_between(e, [100 * p.qber_lo for p in curve], [100 * p.qber_hi for p in curve],
                            color=line.get_color(), alpha=0.15, lw=0)
        for name, value in thresholds.items():
            ax.axhline(100 * value, color="k", lw=0.8, ls=THRESHOLD_STYLE.get(name, "-"),
                       label=f"{name} {value:.0%}")
        ax.set_xlabel("satellite elevation (deg)")
        ax.set_ylabel("QBER (%)")
        ax.set_ylim(bottom=0)
        if title:
            ax.set_title(title, fontsize=9)
        ax.legend(loc="best")
        return save(fig, path)


def plot_sky_map(res: DownlinkResult, path: Path) -> Path:
    """Polar map: azimuth clockwise from north, zenith at the centre."""
    with plt.rc_context(STYLE):
        fig = plt.figure(figsize=(4.5, 4.5))
        ax = fig.add_subplot(projection="polar")
        ax.set_theta_zero_location("N")
        ax.set_theta_direction(-1)
        az = [math.radians(r[0]) for r in res.skymap]
        zen = [90.0 - r[1] for r in res.skymap]
        sc = ax.scatter(az, zen, c=[r[2] for r in res.skymap], cmap="magma", s=30, edgecolors="k",
                        linewidths=0.3)
        ax.set_rlim(0, 90)
        ax.set_rticks([0, 30, 60, 90])
        ax.set_yticklabels(["90", "60", "30", "0"])
        fig.colorbar(sc, ax=ax, shrink=0.7, label="photon rate (Hz)")
        ax.set_title(f"{res.profile.site_id} {res.profile.band.label()} nm, {res.moon_label} moon",
                     fontsize=9)
        return save(fig, path)
