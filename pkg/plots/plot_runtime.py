#!/usr/bin/env python3
"""Render mean decode time versus distance (log y), one curve per p."""

from __future__ import annotations

import argparse
import sys

import plotlib


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--in", dest="input", required=True, help="results.csv")
    parser.add_argument("--out", required=True, help="output image path")
    args = parser.parse_args(argv)

    rows = plotlib.load_results(args.input)
    drawn = plotlib.plot_runtime_vs_d(rows, args.out)
    assert drawn == len(rows), "plotted point count diverged from row count"
    print(f"wrote {args.out} ({drawn} points)")
    return 0


if __name__ == "__main__":
    try:
        sys.exit(main())
    except Exception as exc:  # noqa: BLE001 - script boundary
        print(f"error: {exc}", file=sys.stderr)
        sys.exit(1)
