"""Shared loading and validation for the figure scripts.

These scripts are read-only consumers of the simulation harness's CSV and
fit-JSON outputs; they render exactly what the files contain and never
recompute statistics. Each plotting function returns the number of points
drawn so callers can assert it equals the number of rows consumed.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from typing import Dict, List, Optional

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402 - backend must be set first

EXPECTED_COLUMNS = (
    "distance",
    "p",
    "samples",
    "logical_errors",
    "non_converged",
    "ler",
    "ler_stderr",
    "mean_decode_us",
    "seed",
)


class SchemaError(ValueError):
    """The input file does not match the simulation output schema."""


@dataclass(frozen=True)
class Row:
    distance: int
    p: float
    ler: float
    ler_stderr: float
    mean_decode_us: float


def load_results(path: str) -> List[Row]:
    with open(path, "r", newline="") as handle:
        reader = csv.DictReader(handle)
        columns = tuple(reader.fieldnames or ())
        if columns != EXPECTED_COLUMNS:
            missing = [c for c in EXPECTED_COLUMNS if c not in columns]
            extra = [c for c in columns if c not in EXPECTED_COLUMNS]
            offender = (missing + extra or ["<header>"])[0]
            raise SchemaError(
                f"unexpected results schema in {path}: offending column "
                f"{offender!r} (expected {','.join(EXPECTED_COLUMNS)})"
            )
        rows = [
            Row(
                distance=int(r["distance"]),
                p=float(r["p"]),
                ler=float(r["ler"]),
                ler_stderr=float(r["ler_stderr"]),
                mean_decode_us=float(r["mean_decode_us"]),
            )
            for r in reader
        ]
    if not rows:
        raise SchemaError(f"no data rows in {path}")
    return rows


def load_fit(path: str) -> Dict[str, float]:
    with open(path, "r") as handle:
        fit = json.load(handle)
    if "p_th" not in fit:
        raise SchemaError(f"fit file {path} has no 'p_th' field")
    return fit


def group_by(rows: List[Row], key: str) -> Dict:
    grouped: Dict = {}
    for row in rows:
        grouped.setdefault(getattr(row, key), []).append(row)
    return {k: sorted(v, key=lambda r: (r.p, r.distance)) for k, v in sorted(grouped.items())}


def plot_ler_vs_p(rows: List[Row], fit: Optional[Dict[str, float]], out: str) -> int:
    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    drawn = 0
    for distance, group in group_by(rows, "distance").items():
        ax.errorbar(
            [r.p for r in group],
            [r.ler for r in group],
            yerr=[r.ler_stderr for r in group],
            marker="o",
            markersize=3,
            capsize=2,
            label=f"d = {distance}",
        )
        drawn += len(group)
    if fit is not None:
        ax.axvline(fit["p_th"], color="gray", linestyle="--", linewidth=1,
                   label=f"fitted threshold {fit['p_th']:.4f}")
    ax.set_xlabel("physical error rate p")
    ax.set_ylabel("logical error rate")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return drawn


def plot_threshold_zoom(
    rows: List[Row], fit: Dict[str, float], out: str, half_width: float = 0.02
) -> int:
    p_th = fit["p_th"]
    window = [r for r in rows if abs(r.p - p_th) <= half_width]
    if not window:
        raise SchemaError("no rows fall inside the threshold window")
    fig, ax = plt.subplots(figsize=(5.2, 4.4))
    drawn = 0
    for distance, group in group_by(window, "distance").items():
        ax.errorbar(
            [r.p for r in group],
            [r.ler for r in group],
            yerr=[r.ler_stderr for r in group],
            marker="o",
            markersize=3,
            capsize=2,
            label=f"d = {distance}",
        )
        drawn += len(group)
    ax.axvline(p_th, color="gray", linestyle="--", linewidth=1)
    ax.set_yscale("log")
    ax.set_xlabel("physical error rate p")
    ax.set_ylabel("logical error rate")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return drawn


def plot_ler_vs_d(rows: List[Row], out: str) -> int:
    fig, ax = plt.subplots(figsize=(5.6, 4.4))
    drawn = 0
    for p, group in group_by(rows, "p").items():
        by_d = sorted(group, key=lambda r: r.distance)
        ax.errorbar(
            [r.distance for r in by_d],
            [r.ler for r in by_d],
            yerr=[r.ler_stderr for r in by_d],
            marker="s",
            markersize=3,
            capsize=2,
            label=f"p = {p:g}",
        )
        drawn += len(by_d)
    ax.set_yscale("log")
    ax.set_xlabel("code distance d")
    ax.set_ylabel("logical error rate")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return drawn


def plot_runtime_vs_d(rows: List[Row], out: str) -> int:
    fig, ax = plt.subplots(figsize=(5.6, 4.4))
    drawn = 0
    for p, group in group_by(rows, "p").items():
        by_d = sorted(group, key=lambda r: r.distance)
        ax.plot(
            [r.distance for r in by_d],
            [r.mean_decode_us for r in by_d],
            marker="^",
            markersize=4,
            label=f"p = {p:g}",
        )
        drawn += len(by_d)
    ax.set_yscale("log")
    ax.set_xlabel("code distance d")
    ax.set_ylabel("mean decode time (us)")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return drawn
