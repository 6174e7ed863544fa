"""Figure-rendering CLI: ``readout-plot lines|heatmap --csv <in> --out <img>``."""
from __future__ import annotations

import argparse
import json
import sys

from .heatmap import HeatmapFigureSpec, plot_heatmap
from .lines import LineFigureSpec, plot_lines


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="readout-plot",
        description="Render benchmark CSV output as figures",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    lines = subs.add_parser("lines", help="error curves with SEM bands")
    heat = subs.add_parser("heatmap", help="advantage-ratio lattice with unit contour")
    for sub in (lines, heat):
        sub.add_argument("--csv", required=True, help="results CSV (documented schema)")
        sub.add_argument("--out", required=True, help="output image path (format by extension)")
        sub.add_argument("--logx", action="store_true")
        sub.add_argument("--logy", action="store_true")
        sub.add_argument("--title")
    lines.add_argument("--group", default="method", help="column that defines the line series")
    lines.set_defaults(kind="lines")
    heat.set_defaults(kind="heatmap")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.kind == "lines":
            plot_lines(LineFigureSpec(
                csv=args.csv, out=args.out, logx=args.logx, logy=args.logy,
                group_key=args.group, title=args.title,
            ))
        else:
            plot_heatmap(HeatmapFigureSpec(
                csv=args.csv, out=args.out, logx=args.logx, logy=args.logy,
                title=args.title,
            ))
        print(f"wrote {args.out}")
        return 0
    except Exception as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
