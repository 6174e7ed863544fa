"""Advantage-map figures: the direct/compression error ratio on a noise lattice.

Cells are colored as-is with pcolormesh (no interpolation), the ratio = 1
boundary is overlaid as a contour when both sides are present, and device
marker coordinates from the metadata sidecar are drawn as points.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .schema import SchemaError, read_metadata, read_rows


@dataclass
class HeatmapFigureSpec:
    csv: str
    out: str
    logx: bool = True
    logy: bool = True
    title: str | None = None


def _pivot(rows) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Rebuild the (gamma, readout) lattice and ratio matrix from raw rows."""
    axis_key = "xi" if any(r["xi"] is not None for r in rows) else "e0"
    cells: dict[tuple[float, float], dict[str, float]] = {}
    for row in rows:
        key = (row["gamma"], row[axis_key])
        cells.setdefault(key, {})[row["method"]] = row["mean_E"]
    gammas = np.array(sorted({g for g, _ in cells}))
    readouts = np.array(sorted({r for _, r in cells}))
    ratio = np.full((len(gammas), len(readouts)), np.nan)
    for (g, r), methods in cells.items():
        if "direct" not in methods or "compression" not in methods:
            raise SchemaError("advantage-map CSV needs a direct and a compression row per cell")
        gi = int(np.searchsorted(gammas, g))
        ri = int(np.searchsorted(readouts, r))
        ratio[gi, ri] = methods["direct"] / methods["compression"]
    if np.isnan(ratio).any():
        raise SchemaError("advantage-map grid is not rectangular")
    return gammas, readouts, ratio


def plot_heatmap(spec: HeatmapFigureSpec) -> dict:
    """Render the ratio lattice and return the plotted arrays."""
    rows = read_rows(spec.csv)
    if {r["task"] for r in rows} != {"advantage_map"}:
        raise SchemaError("heatmap needs advantage_map rows")
    meta = read_metadata(spec.csv)
    gammas, readouts, ratio = _pivot(rows)
    axis_kind = (meta or {}).get("readout_axis_kind", "xi")
    if axis_kind == "scale" and meta and len(meta.get("readout_grid", ())) == len(readouts):
        # asymmetric maps sweep a common scale k of both flip rates; the CSV
        # stores the scaled e0 values, the sidecar the k grid in plot units
        readouts = np.asarray(meta["readout_grid"])

    fig, ax = plt.subplots(figsize=(5.0, 4.0), dpi=150)
    # cell-edge grids so each lattice point colors exactly one cell
    def edges(vals):
        logs = np.log10(vals)
        if len(logs) > 1:
            pad = np.diff(logs).mean() / 2
        else:
            pad = 0.5
        return 10 ** np.concatenate([[logs[0] - pad], logs[:-1] + np.diff(logs) / 2, [logs[-1] + pad]])

    mesh = ax.pcolormesh(
        edges(readouts), edges(gammas), ratio, shading="flat", cmap="viridis"
    )
    fig.colorbar(mesh, ax=ax, label="E_direct / E_compression")
    if ratio.min() < 1.0 < ratio.max():
        ax.contour(readouts, gammas, ratio, levels=[1.0], colors="red")
    else:
        warnings.warn("ratio never crosses 1; skipping the boundary contour")
    if meta and meta.get("devices"):
        xs = [d["readout"] for d in meta["devices"]]
        ys = [d["gamma"] for d in meta["devices"]]
        inside = [
            (x, y) for x, y in zip(xs, ys)
            if readouts.min() <= x <= readouts.max() and gammas.min() <= y <= gammas.max()
        ]
        if inside:
            ax.plot(*zip(*inside), linestyle="none", marker="o", color="red",
                    markeredgecolor="white")
    if spec.logx:
        ax.set_xscale("log")
    if spec.logy:
        ax.set_yscale("log")
    ax.set_xlabel("readout-rate scale k" if axis_kind == "scale" else "readout error rate")
    ax.set_ylabel("depolarizing probability per gate")
    if spec.title:
        ax.set_title(spec.title)
    fig.tight_layout()
    fig.savefig(spec.out)
    plt.close(fig)
    return {
        "gammas": gammas.tolist(),
        "readouts": readouts.tolist(),
        "ratio": ratio.tolist(),
    }
