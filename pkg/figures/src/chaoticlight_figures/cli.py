"""Command line entry point: ``figures <id|all> --in DIR --out DIR``."""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from .io import FigureInputError
from .plots import RENDERERS, render


def _parse_ids(token: str) -> List[int]:
    if token == "all":
        return sorted(RENDERERS)
    raw = token[3:] if token.startswith("fig") else token
    try:
        fig_id = int(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"figure id must be 1-{max(RENDERERS)} or 'all', got {token!r}"
        )
    if fig_id not in RENDERERS:
        raise argparse.ArgumentTypeError(
            f"figure id must be 1-{max(RENDERERS)} or 'all', got {token!r}"
        )
    return [fig_id]


def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="figures",
        description="Render figures from a completed simulation output directory.",
    )
    parser.add_argument("figure", type=_parse_ids,
                        help="figure id (1-9, optionally prefixed 'fig') or 'all'")
    parser.add_argument("--in", dest="in_dir", required=True,
                        help="directory holding the harness outputs")
    parser.add_argument("--out", dest="out_dir", required=True,
                        help="directory to write images into")
    args = parser.parse_args(argv)
    try:
        for path in render(args.figure, args.in_dir, args.out_dir):
            print(path)
    except FigureInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
