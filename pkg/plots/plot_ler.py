#!/usr/bin/env python3
"""Render logical-error-rate figures from a simulation results CSV.

Kinds: ler_vs_p (one curve per distance, stderr error bars, optional
threshold line from a fit JSON) and threshold_zoom (log-scale closeup
around the fitted threshold; requires --fit).
"""

from __future__ import annotations

import argparse
import sys

import plotlib


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--in", dest="input", required=True, help="results.csv")
    parser.add_argument("--fit", default=None, help="fit.json with p_th")
    parser.add_argument(
        "--kind", choices=("ler_vs_p", "threshold_zoom"), default="ler_vs_p"
    )
    parser.add_argument("--out", required=True, help="output image path")
    args = parser.parse_args(argv)

    rows = plotlib.load_results(args.input)
    fit = plotlib.load_fit(args.fit) if args.fit else None
    if args.kind == "ler_vs_p":
        drawn = plotlib.plot_ler_vs_p(rows, fit, args.out)
        assert drawn == len(rows), "plotted point count diverged from row count"
    else:
        if fit is None:
            parser.error("--kind threshold_zoom requires --fit")
        window = [r for r in rows if abs(r.p - fit["p_th"]) <= 0.02]
        drawn = plotlib.plot_threshold_zoom(rows, fit, args.out)
        assert drawn == len(window), "plotted point count diverged from row count"
    print(f"wrote {args.out} ({drawn} points)")
    return 0


if __name__ == "__main__":
    try:
        sys.exit(main())
    except Exception as exc:  # noqa: BLE001 - script boundary
        print(f"error: {exc}", file=sys.stderr)
        sys.exit(1)
