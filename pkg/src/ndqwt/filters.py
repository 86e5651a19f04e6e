"""Ginzberg's length-10 quaternion filter pair with five vanishing moments.

Role assignment: the symmetric taps (built from C1, C2) sum to sqrt(2) and are
used as the low-pass / scaling filter; the antisymmetric taps (C3..C6) sum to
zero and are the high-pass / wavelet filter. Ginzberg's own labels are the
other way round, and the filter names ``h``/``g`` are swapped in some
write-ups of this family; the sums settle which is which.
:func:`verify_design_equations` reports residuals for both assignments.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .qlinalg import left_mult_blocks

SQRT2 = math.sqrt(2.0)
SQRT35 = math.sqrt(35.0)

C1 = SQRT2 / 256
C2 = SQRT35 / 256
C3 = 1 / 24576
C4 = 1 / 3072
C5 = 1 / 256
C6 = 1 / 12288


@dataclass(frozen=True)
class FilterBank:
    lowpass: np.ndarray   # (10, 4)
    highpass: np.ndarray  # (10, 4)
    vanishing_moments: int = 5

    def __post_init__(self):
        for name in ("lowpass", "highpass"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if self.lowpass.shape != self.highpass.shape or self.lowpass.shape[-1] != 4:
            raise ValueError("lowpass and highpass must both have shape (L, 4)")

    @property
    def length(self) -> int:
        return self.lowpass.shape[0]


def _mirror(first_half, sign):
    half = np.array(first_half, dtype=float)
    return np.concatenate([half, sign * half[::-1]])


@lru_cache(maxsize=None)
def ginzberg_filters() -> FilterBank:
    """The shipped L=10, A=5 filter bank (taps as quaternion rows ``(re, i, j, k)``)."""
    symmetric = _mirror([
        (0.0, C2, 0.0, 0.0),
        (-5 * C1, 0.0, 0.0, C2),
        (-7 * C1, -7 * C2, 0.0, 3 * C2),
        (35 * C1, -5 * C2, 0.0, C2),
        (105 * C1, 11 * C2, 0.0, -5 * C2),
    ], +1.0)
    antisymmetric = _mirror([
        (C3 * 0.0, C3 * 89 * SQRT35, C3 * 35 * SQRT2, C3 * -35 * SQRT35),
        (C3 * -480 * SQRT2, C3 * 35 * SQRT35, C3 * -175 * SQRT2, C3 * 79 * SQRT35),
        (C4 * 84 * SQRT2, C4 * -91 * SQRT35, C4 * 35 * SQRT2, C4 * SQRT35),
        (C5 * 35 * SQRT2, C5 * 5 * SQRT35, 0.0, C5 * -SQRT35),
        (C6 * -5040 * SQRT2, C6 * 577 * SQRT35, C6 * -245 * SQRT2, C6 * 5 * SQRT35),
    ], -1.0)
    return FilterBank(lowpass=symmetric, highpass=antisymmetric)


def _max_abs(x) -> float:
    return float(np.max(np.abs(x)))


def _shift_orthogonality(a, b, m):
    """sum_t A_t B_{t+2m}^T over the overlapping taps (m may be negative)."""
    n = len(a)
    acc = np.zeros((4, 4))
    for t in range(n):
        u = t + 2 * m
        if 0 <= u < n:
            acc += a[t] @ b[u].T
    return acc


@dataclass
class DesignReport:
    """Max-abs residual of each design equation, per role assignment."""

    residuals: dict[str, dict[str, float]] = field(default_factory=dict)
    moment_filter: str = ""
    shipped: str = "symmetric-lowpass"

    def worst(self, assignment: str | None = None) -> float:
        return max(self.residuals[assignment or self.shipped].values())

    def passed(self, tol: float = 1e-10) -> bool:
        return self.worst() < tol

    def lines(self) -> list[str]:
        out = []
        for name, table in self.residuals.items():
            tag = " (shipped)" if name == self.shipped else ""
            out.append(f"assignment {name}{tag}")
            for key, value in table.items():
                out.append(f"  {key:<28s} {value:.3e}")
        out.append(f"vanishing-moment equations hold for: {self.moment_filter}")
        return out


def _assignment_residuals(low, high):
    H = left_mult_blocks(low)
    G = left_mult_blocks(high)
    eye = np.eye(4)
    t = np.arange(len(low), dtype=float)
    res = {"sum H = sqrt2 I": _max_abs(H.sum(axis=0) - SQRT2 * eye),
           "sum G = 0": _max_abs(G.sum(axis=0))}
    for d in range(5):
        weights = (-1.0) ** t * t ** d
        res[f"moment d={d}"] = _max_abs(np.tensordot(weights, H, axes=1))
    for m in range(5):
        res[f"orth H,H m={m}"] = _max_abs(_shift_orthogonality(H, H, m) - (m == 0) * eye)
    for m in range(5):
        res[f"orth G,G m={m}"] = _max_abs(_shift_orthogonality(G, G, m) - (m == 0) * eye)
    for m in range(-4, 5):
        res[f"orth H,G m={m}"] = _max_abs(_shift_orthogonality(H, G, m))
    return res


def verify_design_equations(fb: FilterBank | None = None) -> DesignReport:
    """Evaluate the design equations in the 4x4 left-multiplication embedding.

    Each assignment is checked with its own low-pass in the role of ``H``.
    The report also names the filter on which the alternating moment
    equations ``sum (-1)^t t^d H_t = 0`` actually hold.
    """
    fb = fb or ginzberg_filters()
    t = np.arange(fb.length, dtype=float)

    def moment_worst(taps):
        blocks = left_mult_blocks(taps)
        return max(_max_abs(np.tensordot((-1.0) ** t * t ** d, blocks, axes=1)) for d in range(5))

    if moment_worst(fb.lowpass) <= moment_worst(fb.highpass):
        moment_name = "lowpass"
    else:
        moment_name = "highpass"

    report = DesignReport(moment_filter=moment_name)
    report.residuals["symmetric-lowpass"] = _assignment_residuals(fb.lowpass, fb.highpass)
    report.residuals["antisymmetric-lowpass"] = _assignment_residuals(fb.highpass, fb.lowpass)
    return report
