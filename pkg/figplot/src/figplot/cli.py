"""Command line entry point: one subcommand, `render`.

Exit codes: 0 success, 2 schema or usage error.
"""

import argparse
import sys

from .csv_contract import SchemaError
from .render import ALL_KINDS, PlotSpec, render


def build_parser():
    parser = argparse.ArgumentParser(
        prog="figplot", description="Render figures from result CSV files"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    rend = sub.add_parser("render", help="render one figure")
    rend.add_argument("--kind", required=True, choices=ALL_KINDS)
    rend.add_argument("--in", dest="input_csv", required=True, help="input CSV")
    rend.add_argument("--out", required=True, help="output image (png or svg)")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        render(PlotSpec(input_csv=args.input_csv, kind=args.kind, output=args.out))
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
