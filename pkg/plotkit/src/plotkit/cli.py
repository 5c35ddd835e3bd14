"""Command-line interface: qsync-plot fig1|fig2|fig3|fig4|fig5 --data DIR --out DIR.

Exits 0 on success and 2 on any schema violation or missing input.
"""

from __future__ import annotations

import argparse
import os
import sys

from .figures import FIGURES
from .io import SchemaError


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="qsync-plot",
        description="Regenerate the reference figures from simulator CSV outputs.")
    parser.add_argument("figure", choices=sorted(FIGURES),
                        help="which figure to render")
    parser.add_argument("--data", default=".", metavar="DIR",
                        help="directory with the preset CSV outputs")
    parser.add_argument("--out", default=".", metavar="DIR",
                        help="directory for the rendered image")
    args = parser.parse_args(argv)

    try:
        os.makedirs(args.out, exist_ok=True)
        path = FIGURES[args.figure](args.data, args.out)
    except (SchemaError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
