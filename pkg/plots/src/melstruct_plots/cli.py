"""Figure rendering command line: plot a report section to an image file."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .figures import FIGURE_IDS, FigureSpec, MissingSectionError, UnknownFigureError, render


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="melstruct-plot", description="Render a melstruct report figure."
    )
    parser.add_argument("--report", type=Path, required=True, help="report JSON path")
    parser.add_argument("--figure", required=True, help=f"one of {', '.join(FIGURE_IDS)}")
    parser.add_argument("--out", type=Path, required=True, help="output image path")
    parser.add_argument("--style", help="style options as a JSON object")
    try:
        args = parser.parse_args(argv)
    except SystemExit:
        return 1

    style = {}
    if args.style:
        try:
            style = json.loads(args.style)
        except json.JSONDecodeError as exc:
            print(f"error: --style is not valid JSON: {exc}", file=sys.stderr)
            return 1
        if not isinstance(style, dict):
            print("error: --style must be a JSON object", file=sys.stderr)
            return 1

    try:
        spec = FigureSpec(
            figure_id=args.figure, report_path=args.report, out_path=args.out, style=style
        )
    except UnknownFigureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        path = render(spec)
    except MissingSectionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
