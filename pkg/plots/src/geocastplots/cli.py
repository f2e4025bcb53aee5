"""plots CLI: render one figure kind from a harness CSV."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import KINDS, FigureSpec, SchemaError, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="plots")
    parser.add_argument("--kind", choices=KINDS, required=True)
    parser.add_argument("--in", dest="infile", required=True, help="harness CSV input")
    parser.add_argument("--out", required=True, help="image output path")
    args = parser.parse_args(argv)
    try:
        spec = FigureSpec(args.kind, Path(args.infile), Path(args.out))
        out = render(spec)
    except (SchemaError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
