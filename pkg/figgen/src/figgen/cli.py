"""figgen <figure_kind> <csv> <out.png>"""

import argparse
import sys

from .render import FIGURE_KINDS, FigureSpec, SchemaMismatch, render


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="figgen",
        description="Render a polariton-bjj CSV dataset to a figure.",
    )
    parser.add_argument("figure_kind", choices=FIGURE_KINDS)
    parser.add_argument("csv", help="input CSV path")
    parser.add_argument("output", help="output image path (png)")
    args = parser.parse_args(argv)
    try:
        out = render(FigureSpec(args.csv, args.figure_kind, args.output))
    except (SchemaMismatch, OSError) as exc:
        print(f"figgen: error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
