"""Command-line front end.

    bhtrimer-figures <fig1|fig2|fig3|fig4> [--artifacts DIR] [--out DIR]

Reads the named preset's CSV artifacts from the artifact directory and
writes <name>.svg. Exit codes: 0 success, 2 usage error or missing or
malformed input.
"""

from __future__ import annotations

import argparse
import sys

from .readers import FigureInputError
from .recipes import FIGURE_NAMES, preset_recipe
from .render import render_figure

EXIT_OK = 0
EXIT_USAGE = 2


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="bhtrimer-figures",
        description="Render simulator CSV artifacts as publication-style figures.",
    )
    parser.add_argument("figure", help=f"one of: {', '.join(FIGURE_NAMES)}")
    parser.add_argument("--artifacts", default=".", help="directory holding the preset CSVs")
    parser.add_argument("--out", default=".", help="output directory for the image")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    if args.figure not in FIGURE_NAMES:
        print(
            f"error: unknown figure {args.figure!r}; valid figures: "
            f"{', '.join(FIGURE_NAMES)}",
            file=sys.stderr,
        )
        return EXIT_USAGE
    recipe = preset_recipe(args.figure, args.artifacts, args.out)
    try:
        out = render_figure(recipe)
    except FigureInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"wrote {out}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
