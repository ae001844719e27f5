"""Standalone figure command.

Exit codes: 0 success, 2 usage error, 3 I/O error, 4 schema mismatch.
"""

from __future__ import annotations

import argparse
import sys

from .render import KINDS, FigureSpec, SchemaError, render


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pacviz", description=__doc__)
    p.add_argument("--kind", required=True, choices=KINDS)
    p.add_argument("--in", dest="inputs", action="append", required=True,
                   metavar="CSV", help="input CSV (repeatable)")
    p.add_argument("--out", required=True, metavar="IMAGE")
    p.add_argument("--manifest", default=None,
                   help="manifest to hash into the footer (default: "
                        "manifest.txt next to the first input, if present)")
    p.add_argument("--title", default=None)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = FigureSpec(inputs=args.inputs, kind=args.kind, output=args.out,
                      manifest=args.manifest, title=args.title)
    try:
        render(spec)
        return 0
    except SchemaError as e:
        print(f"schema mismatch: {e}", file=sys.stderr)
        return 4
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"i/o error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
