"""`figures render --spec spec.json`: batch figure rendering."""

from __future__ import annotations

import argparse
import sys

from .render import FigureInputError, FigureSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="figures", description="Render qeraser sweep CSVs to PNG and SVG.")
    sub = parser.add_subparsers(dest="command", required=True)
    p_render = sub.add_parser("render", help="render figures from a JSON spec")
    p_render.add_argument("--spec", required=True, nargs="+",
                          help="one or more figure-spec JSON files")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    status = 0
    for spec_path in args.spec:
        try:
            spec = FigureSpec.from_json(spec_path)
            result = render(spec)
        except (FigureInputError, OSError, KeyError, ValueError) as exc:
            print(f"error: {spec_path}: {exc}", file=sys.stderr)
            status = 1
            continue
        marker = (f" marker at ({result.marker[0]:g}, {result.marker[1]:g})"
                  if result.marker else "")
        print(f"rendered {' and '.join(result.outputs)}{marker}")
    return status


if __name__ == "__main__":
    sys.exit(main())
