"""Wavelet spectra, slope regression, Hurst estimates and phase-average features.

Levels are labelled ``1..p`` from the coarsest detail level to the finest.
The log-energy at a level is ``log2`` of the mean squared quaternion modulus
of its coefficients. For fBm these decay linearly in the level with slope
``-(2H + 1)`` in 1-D and ``-(2H + 2)`` along the 2-D diagonal hierarchy.

The transforms are circular. A path of fBm with ``H > 1/2`` does not wrap
smoothly: the jump between its last and first samples feeds every detail level
and drags the 1-D estimate towards 1/2 (about 0.53 for H = 0.7 on length 4096).
:func:`end_match` removes the straight line through the end points before
transforming, which closes the jump. Feature extraction applies it to 1-D
signals by default; in 2-D the edge effect is mild and row/column end
matching biased the estimate low, so it is off by default there.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence, TextIO

import numpy as np

from .errors import DegenerateLevel, InsufficientPoints, InvalidLevels
from .quaternion import qabs, qphases
from .transform1d import (Decomposition1D, TransformPlan1D, build_plan_1d, forward_1d,
                          weight_diagonal)
from .transform2d import (Decomposition2D, TransformPlan2D, build_plan_2d, diagonal_blocks,
                          forward_2d)

# A level whose mean energy is below this fraction of the signal's mean
# energy is numerically zero (the transform leaves ~1e-16 relative residue
# where exact arithmetic gives zero).
DEGENERATE_RTOL = 1e-24


class SpectrumPoint(NamedTuple):
    level: int
    log_energy: float


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    levels_used: tuple[int, int]
    dimension: int = 1

    @property
    def hurst(self) -> float:
        return hurst_from_slope(self.slope, self.dimension)


def hurst_from_slope(slope: float, dimension: int = 1) -> float:
    if dimension == 1:
        return -(slope + 1.0) / 2.0
    if dimension == 2:
        return -(slope + 2.0) / 2.0
    raise ValueError(f"dimension must be 1 or 2, got {dimension}")


def end_match(x) -> np.ndarray:
    """Subtract the line joining the end points along every axis of a real array.

    In 2-D the row pass is followed by a column pass; the column correction is
    the same at the first and last column, so both wraps are closed.
    """
    out = np.array(x, dtype=float)
    for axis in range(out.ndim):
        n = out.shape[axis]
        if n < 2:
            continue
        first = np.take(out, [0], axis=axis)
        last = np.take(out, [n - 1], axis=axis)
        shape = [1] * out.ndim
        shape[axis] = n
        ramp = (np.arange(n) / (n - 1)).reshape(shape)
        out = out - (last - first) * ramp
    return out


def _mean_energy(coeffs: np.ndarray) -> float:
    return float(np.mean(np.sum(np.square(coeffs), axis=-1)))


def _reference_energy_1d(d: Decomposition1D) -> float:
    # Parseval for W^H T W = I: sum_b w_b * mean_b |d|^2 = mean |y|^2
    bands = [d.coarse] + list(d.details)
    return sum(w * _mean_energy(b) for w, b in zip(weight_diagonal(1, d.p), bands))


def _reference_energy_2d(B: Decomposition2D) -> float:
    p1, p2 = B.levels
    w1, w2 = weight_diagonal(1, p1), weight_diagonal(1, p2)
    energies = np.mean(np.sum(np.square(B.coeffs), axis=-1), axis=(2, 3))
    return float(w1 @ energies @ w2)


def _log_energies(bands: Sequence[np.ndarray], reference: float, strict: bool):
    """``(points, degenerate_levels)``; raises on the first degenerate level if strict."""
    points, degenerate = [], []
    for level, band in enumerate(bands, start=1):
        energy = _mean_energy(band)
        if energy == 0.0 or energy <= DEGENERATE_RTOL * reference:
            if strict:
                raise DegenerateLevel(level, energy)
            degenerate.append(level)
            points.append(SpectrumPoint(level, float("nan")))
        else:
            points.append(SpectrumPoint(level, math.log2(energy)))
    return points, degenerate


def level_energies_1d(d: Decomposition1D) -> list[SpectrumPoint]:
    if d.p < 2:
        raise InvalidLevels(f"a spectrum needs at least 2 detail levels, got {d.p}")
    return _log_energies(list(d.details), _reference_energy_1d(d), strict=True)[0]


def level_energies_2d(B: Decomposition2D, s: int = 0) -> list[SpectrumPoint]:
    blocks = diagonal_blocks(B, s)
    if len(blocks) < 2:
        raise InvalidLevels(f"a spectrum needs at least 2 diagonal blocks, got {len(blocks)}")
    return _log_energies(blocks, _reference_energy_2d(B), strict=True)[0]


def parse_level_range(text: str) -> tuple[int, int]:
    """``"A:B"`` -> ``(A, B)``, inclusive."""
    try:
        lo, hi = (int(v) for v in text.split(":"))
    except ValueError:
        raise ValueError(f"level range must look like A:B, got {text!r}") from None
    if lo > hi:
        raise ValueError(f"empty level range {text!r}")
    return lo, hi


def fit_slope(points: Sequence[SpectrumPoint], levels: tuple[int, int] | None = None,
              method: str = "ols", dimension: int = 1) -> SlopeFit:
    """Least-squares line through ``(level, log_energy)`` over an inclusive level range."""
    if method != "ols":
        raise ValueError(f"unsupported regression method {method!r}")
    if levels is None and points:
        levels = (min(p.level for p in points), max(p.level for p in points))
    chosen = [p for p in points if levels[0] <= p.level <= levels[1]] if levels else []
    if len(chosen) < 2:
        raise InsufficientPoints(f"need at least 2 spectrum points in {levels}, got {len(chosen)}")
    x = np.array([p.level for p in chosen], dtype=float)
    y = np.array([p.log_energy for p in chosen], dtype=float)
    xc = x - x.mean()
    slope = float(xc @ (y - y.mean()) / (xc @ xc))
    intercept = float(y.mean() - slope * x.mean())
    return SlopeFit(slope, intercept, (int(x.min()), int(x.max())), dimension)


@dataclass(frozen=True)
class PhaseAverages:
    phi: np.ndarray
    theta: np.ndarray
    psi: np.ndarray
    excluded: tuple[int, ...]  # zero-modulus coefficients skipped, per level


def phase_averages(levels: Iterable[np.ndarray]) -> PhaseAverages:
    """Arithmetic mean of each phase over the coefficients of every level.

    Zero coefficients have no phase and are left out; a level with nothing
    left averages to NaN.
    """
    means, excluded = [], []
    for coeffs in levels:
        q = np.asarray(coeffs, dtype=float).reshape(-1, 4)
        keep = qabs(q) > 0.0
        excluded.append(int(q.shape[0] - keep.sum()))
        if keep.any():
            means.append([float(np.mean(a)) for a in qphases(q[keep])])
        else:
            means.append([math.nan] * 3)
    arr = np.array(means, dtype=float).reshape(-1, 3)
    return PhaseAverages(arr[:, 0], arr[:, 1], arr[:, 2], tuple(excluded))


@dataclass(frozen=True)
class FeatureRow:
    id: str
    slope: float
    hurst: float
    phi: tuple[float, ...]
    theta: tuple[float, ...]
    psi: tuple[float, ...]
    excluded: tuple[int, ...] = ()
    degenerate: tuple[int, ...] = field(default=())

    @property
    def p(self) -> int:
        return len(self.phi)

    def values(self) -> list[float]:
        return [self.slope, self.hurst, *self.phi, *self.theta, *self.psi]


def _feature_row(ident, bands, reference, levels, dimension) -> FeatureRow:
    points, degenerate = _log_energies(bands, reference, strict=False)
    if degenerate:
        slope = hurst = math.nan
    else:
        fit = fit_slope(points, levels, dimension=dimension)
        slope, hurst = fit.slope, fit.hurst
    ph = phase_averages(bands)
    phases = [np.array(a) for a in (ph.phi, ph.theta, ph.psi)]
    for level in degenerate:  # phases of round-off are meaningless
        for a in phases:
            a[level - 1] = math.nan
    return FeatureRow(str(ident), slope, hurst, *(tuple(a.tolist()) for a in phases),
                      excluded=ph.excluded, degenerate=tuple(degenerate))


def features_1d(y, plan: TransformPlan1D | None = None, levels: tuple[int, int] | None = None,
                ident="0", match_ends: bool = True) -> FeatureRow:
    """Slope, Hurst estimate and per-level phase averages of a real signal.

    A level that is numerically zero leaves slope and Hurst as NaN and that
    level's phases as NaN; ``FeatureRow.degenerate`` lists such levels.
    """
    y = np.asarray(y, dtype=float)
    plan = plan or build_plan_1d(y.shape[0])
    if plan.p < 2:
        raise InvalidLevels(f"features need at least 2 detail levels, got {plan.p}")
    d = forward_1d(plan, end_match(y) if match_ends else y)
    # degeneracy is judged against the raw input, so a signal that end matching
    # reduces to round-off (a straight line) counts as degenerate
    return _feature_row(ident, list(d.details), float(np.mean(y * y)), levels, 1)


def features_2d(A, plan: TransformPlan2D | None = None, s: int = 0,
                levels: tuple[int, int] | None = None, ident="0",
                match_ends: bool = False) -> FeatureRow:
    """Features from the diagonal blocks ``(j, j+s)`` of a real image."""
    A = np.asarray(A, dtype=float)
    plan = plan or build_plan_2d(*A.shape)
    B = forward_2d(plan, end_match(A) if match_ends else A)
    blocks = diagonal_blocks(B, s)
    if len(blocks) < 2:
        raise InvalidLevels(f"features need at least 2 diagonal blocks, got {len(blocks)}")
    return _feature_row(ident, blocks, float(np.mean(A * A)), levels, 2)


def feature_header(p: int) -> list[str]:
    return (["id", "slope", "hurst"] + [f"phi_{j}" for j in range(1, p + 1)]
            + [f"theta_{j}" for j in range(1, p + 1)] + [f"psi_{j}" for j in range(1, p + 1)])


def format_float(x: float) -> str:
    """17 significant digits, which round-trips every double."""
    return format(float(x), ".17g")


def write_features_csv(rows: Sequence[FeatureRow], out: TextIO, p: int | None = None) -> None:
    if p is None:
        if not rows:
            raise ValueError("cannot infer the level count from zero rows; pass p")
        p = rows[0].p
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(feature_header(p))
    for row in rows:
        if row.p != p:
            raise ValueError(f"row {row.id!r} has {row.p} levels, header has {p}")
        writer.writerow([row.id] + [format_float(v) for v in row.values()])


def features_csv_text(rows: Sequence[FeatureRow], p: int | None = None) -> str:
    buf = io.StringIO()
    write_features_csv(rows, buf, p)
    return buf.getvalue()
