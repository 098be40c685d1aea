"""Threshold estimation and summary tables over simulation records.

The threshold fit uses the standard finite-size-scaling ansatz: near the
threshold the logical error rate collapses onto a single curve in the
rescaled variable x = (p - p_th) * d^(1/nu), modelled here as the
quadratic A + B x + C x^2. The fit minimizes the stderr-weighted sum of
squared residuals over (p_th, nu, A, B, C) with a coarse (p_th, nu) grid
(linear least squares for A, B, C at each grid point) followed by local
refinement; this is deterministic, unlike general nonlinear optimizers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .sim import SimRecord

MIN_LOGICAL_ERRORS = 10


class FitError(ValueError):
    """The records cannot support a threshold fit."""


@dataclass(frozen=True)
class ThresholdFit:
    p_th: float
    nu: float
    coeffs: Tuple[float, float, float]
    residual: float
    n_points: int


def _weighted_sse(
    p: np.ndarray,
    d: np.ndarray,
    ler: np.ndarray,
    weight: np.ndarray,
    p_th: float,
    nu: float,
) -> Tuple[float, Tuple[float, float, float]]:
    x = (p - p_th) * d ** (1.0 / nu)
    design = np.stack([np.ones_like(x), x, x * x], axis=1) * weight[:, None]
    rhs = ler * weight
    coeffs, _, _, _ = np.linalg.lstsq(design, rhs, rcond=None)
    sse = float(np.sum((design @ coeffs - rhs) ** 2))
    return sse, (float(coeffs[0]), float(coeffs[1]), float(coeffs[2]))


def fit_threshold(records: Sequence[SimRecord]) -> ThresholdFit:
    """Fit (p_th, nu) to the scaling ansatz over the usable records.

    Only points with at least MIN_LOGICAL_ERRORS logical errors enter the
    fit (fewer make the stderr estimate unstable). Requires two or more
    distances with four or more p-values each.
    """
    usable = [r for r in records if r.logical_errors >= MIN_LOGICAL_ERRORS]
    by_distance: dict[int, set[float]] = {}
    for r in usable:
        by_distance.setdefault(r.distance, set()).add(r.p)
    if len(by_distance) < 2:
        raise FitError("need records from at least two distances")
    if any(len(ps) < 4 for ps in by_distance.values()):
        raise FitError("need at least four p-values per distance")

    # Identical curves across distances carry no crossing information.
    by_p: dict[float, set[float]] = {}
    for r in usable:
        by_p.setdefault(r.p, set()).add(r.ler)
    if all(len(lers) == 1 for lers in by_p.values()):
        raise FitError("LER curves are identical across distances; no crossing")

    p = np.array([r.p for r in usable])
    d = np.array([float(r.distance) for r in usable])
    ler = np.array([r.ler for r in usable])
    stderr = np.array(
        [max(r.ler_stderr, 1.0 / r.samples) for r in usable]
    )
    weight = 1.0 / stderr

    p_lo, p_hi = float(p.min()), float(p.max())
    nu_lo, nu_hi = 0.5, 3.0
    best = (np.inf, 0.0, 0.0, (0.0, 0.0, 0.0))
    for _ in range(4):
        p_grid = np.linspace(p_lo, p_hi, 41)
        nu_grid = np.linspace(nu_lo, nu_hi, 25)
        for p_th in p_grid:
            for nu in nu_grid:
                sse, coeffs = _weighted_sse(p, d, ler, weight, float(p_th), float(nu))
                if sse < best[0]:
                    best = (sse, float(p_th), float(nu), coeffs)
        p_step = (p_hi - p_lo) / 40.0
        nu_step = (nu_hi - nu_lo) / 24.0
        p_lo = max(float(p.min()), best[1] - p_step)
        p_hi = min(float(p.max()), best[1] + p_step)
        nu_lo = max(0.5, best[2] - nu_step)
        nu_hi = min(3.0, best[2] + nu_step)

    sse, p_th, nu, coeffs = best
    if not (np.isfinite(sse) and np.isfinite(p_th) and np.isfinite(nu)):
        raise FitError("fit is degenerate (non-finite parameters)")
    return ThresholdFit(
        p_th=p_th, nu=nu, coeffs=coeffs, residual=sse, n_points=len(usable)
    )


def suppression_table(
    records: Sequence[SimRecord],
) -> List[Tuple[float, int, float]]:
    """(p, distance, ler) rows sorted by (p, distance), for per-distance plots."""
    return sorted((r.p, r.distance, r.ler) for r in records)
