"""Command line renderer: one sweep CSV to one PNG or SVG image."""

from __future__ import annotations

import argparse
import sys

from .io import PlotDataError
from .render import KINDS, PlotJob, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cavitypair-plot",
        description="Render a simulator sweep CSV as a heatmap or line plot",
    )
    parser.add_argument("--kind", choices=KINDS, required=True)
    parser.add_argument("--in", dest="source", required=True, metavar="CSV")
    parser.add_argument("--out", dest="output", required=True, metavar="IMG",
                        help="output image path (.png or .svg)")
    parser.add_argument("--series", default="concurrence",
                        help="comma-separated columns for line plots")
    parser.add_argument("--title", default=None)
    parser.add_argument("--x-label", default=None)
    parser.add_argument("--y-label", default=None)
    parser.add_argument("--cmap", default="viridis")
    parser.add_argument("--dpi", type=int, default=150)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    series = tuple(s.strip() for s in args.series.split(",") if s.strip())
    job = PlotJob(source=args.source, kind=args.kind, output=args.output,
                  series=series, title=args.title, x_label=args.x_label,
                  y_label=args.y_label, cmap=args.cmap, dpi=args.dpi)
    try:
        path = render(job)
    except FileNotFoundError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except PlotDataError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
