"""Command line entry point for rendering sweep figures."""

import argparse
import sys

from .figures import FIGURE_KINDS, EmptyDataError, SchemaError, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="coopbeam-plot",
        description="Render a figure from a coopbeam sweep CSV file.")
    parser.add_argument("--csv", required=True, help="input sweep CSV")
    parser.add_argument("--kind", required=True,
                        choices=sorted(FIGURE_KINDS),
                        help="which figure to draw")
    parser.add_argument("--out", required=True, help="output image path")
    args = parser.parse_args(argv)
    try:
        render(args.csv, args.kind, args.out)
    except (OSError, SchemaError, EmptyDataError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
