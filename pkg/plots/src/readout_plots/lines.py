"""Error-curve figures: one line per method with a shaded +-SEM band.

Works for both sweep kinds: error versus system size (x = n) and error versus
total shots (x = shots).  Where a sampled row also carries an infinite-shot
reference, it is drawn as a hollow circle on the same x position.  Every
plotted number is taken verbatim from the CSV; nothing is rescaled or
smoothed, and the returned series expose exactly what was drawn.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .schema import SchemaError, read_rows

_METHOD_COLORS = {"direct": "tab:red", "compression": "tab:blue"}


@dataclass
class LineFigureSpec:
    csv: str
    out: str
    logx: bool = False
    logy: bool = False
    group_key: str = "method"
    title: str | None = None


def _x_column(rows) -> str:
    tasks = {r["task"] for r in rows}
    if tasks <= {"sweep_shots"}:
        return "shots"
    if tasks <= {"sweep_n"}:
        return "n"
    raise SchemaError(f"cannot pick an x axis for task(s) {sorted(tasks)}")


def plot_lines(spec: LineFigureSpec) -> dict:
    """Render the figure and return the plotted series per group."""
    rows = read_rows(spec.csv)
    xcol = _x_column(rows)
    groups: dict[str, list[dict]] = {}
    for row in rows:
        groups.setdefault(str(row[spec.group_key]), []).append(row)

    fig, ax = plt.subplots(figsize=(5.2, 3.6), dpi=150)
    series: dict[str, dict] = {}
    for name in sorted(groups):
        rows_g = sorted(groups[name], key=lambda r: r[xcol])
        xs = [r[xcol] for r in rows_g]
        ys = [r["mean_E"] if r["mean_E"] is not None else r["exact_E"] for r in rows_g]
        if any(y is None for y in ys):
            raise SchemaError(f"rows for {name!r} carry neither mean_E nor exact_E")
        sems = [r["sem_E"] or 0.0 for r in rows_g]
        color = _METHOD_COLORS.get(name)
        ax.plot(xs, ys, label=name, color=color)
        if any(s > 0 for s in sems):
            lo = [y - s for y, s in zip(ys, sems)]
            hi = [y + s for y, s in zip(ys, sems)]
            ax.fill_between(xs, lo, hi, alpha=0.25, color=color, linewidth=0)
        exact_pts = [
            (r[xcol], r["exact_E"])
            for r in rows_g
            if r["exact_E"] is not None and r["mean_E"] is not None
            and r["exact_E"] != r["mean_E"]
        ]
        if exact_pts:
            ax.plot(
                [p[0] for p in exact_pts], [p[1] for p in exact_pts],
                linestyle="none", marker="o", markerfacecolor="none", color=color,
            )
        series[name] = {
            "x": xs,
            "y": ys,
            "sem": sems,
            "exact": [r["exact_E"] for r in rows_g],
        }

    if spec.logx:
        ax.set_xscale("log")
    if spec.logy:
        ax.set_yscale("log")
    ax.set_xlabel("total shots" if xcol == "shots" else "system size n")
    ax.set_ylabel("total variation error")
    if spec.title:
        ax.set_title(spec.title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(spec.out)
    plt.close(fig)
    return series
