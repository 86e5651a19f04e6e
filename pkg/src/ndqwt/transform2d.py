"""Scale-mixing 2-D NDQWT: ``B = W_row A W_col^H`` for any ``m x n`` image.

Block ``(j1, j2)`` of ``B`` pairs row level ``j1`` with column level ``j2``;
index 0 is the smooth band and ``1..p`` run coarsest to finest on each axis.
Reconstruction is ``A = W_row^H T_row B T_col W_col``, which inverts the
forward map because ``W^H T W = I`` on each axis.

The FFT route uses ``A W^H = (W A^H)^H`` so both axes are left applications
of the 1-D filters; ``method="matrix"`` multiplies the dense matrices.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidLevels, InvalidShift
from .qlinalg import QMatrix
from .quaternion import as_quaternion_array, qconj
from .transform1d import TransformPlan1D, analysis, build_plan_1d, synthesis


@dataclass(frozen=True, eq=False)
class TransformPlan2D:
    row_plan: TransformPlan1D
    col_plan: TransformPlan1D

    @property
    def shape(self) -> tuple[int, int]:
        return self.row_plan.m, self.col_plan.m

    @property
    def levels(self) -> tuple[int, int]:
        return self.row_plan.p, self.col_plan.p


def default_levels_2d(m: int, n: int) -> int:
    return max(1, math.ceil(math.log2(min(m, n))) - 1)


def build_plan_2d(m: int, n: int, p1: int | None = None, p2: int | None = None) -> TransformPlan2D:
    """Both level counts default to ``ceil(log2 min(m, n)) - 1``."""
    if min(m, n) < 2:
        raise InvalidLevels(f"image must be at least 2x2, got {m}x{n}")
    default = default_levels_2d(m, n)
    return TransformPlan2D(build_plan_1d(m, default if p1 is None else p1),
                           build_plan_1d(n, default if p2 is None else p2))


def _hermitian(x: np.ndarray) -> np.ndarray:
    """Conjugate transpose over the first two axes of a ``(r, c, 4)`` array."""
    return qconj(np.swapaxes(x, 0, 1))


@dataclass(frozen=True, eq=False)
class Decomposition2D:
    """``(p1+1) x (p2+1)`` grid of ``m x n`` quaternion blocks.

    ``coeffs[j1, j2]`` is block ``(j1, j2)`` as an ``(m, n, 4)`` array.
    """

    coeffs: np.ndarray  # (p1+1, p2+1, m, n, 4)

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if c.ndim != 5 or c.shape[-1] != 4:
            raise DimensionMismatch(f"coefficients must be (p1+1, p2+1, m, n, 4), got {c.shape}")
        object.__setattr__(self, "coeffs", c)

    @property
    def levels(self) -> tuple[int, int]:
        return self.coeffs.shape[0] - 1, self.coeffs.shape[1] - 1

    @property
    def shape(self) -> tuple[int, int]:
        return self.coeffs.shape[2], self.coeffs.shape[3]

    def block(self, j1: int, j2: int) -> QMatrix:
        return QMatrix.from_array(self.coeffs[j1, j2])

    def stacked(self) -> QMatrix:
        """The full ``(p1+1) m x (p2+1) n`` matrix ``B``."""
        b1, b2, m, n, _ = self.coeffs.shape
        return QMatrix.from_array(self.coeffs.transpose(0, 2, 1, 3, 4).reshape(b1 * m, b2 * n, 4))

    @classmethod
    def from_stacked(cls, B, m: int, n: int) -> "Decomposition2D":
        arr = B.as_array() if isinstance(B, QMatrix) else as_quaternion_array(B)
        rows, cols = arr.shape[:2]
        if rows % m or cols % n:
            raise DimensionMismatch(f"{rows}x{cols} does not split into {m}x{n} blocks")
        return cls(arr.reshape(rows // m, m, cols // n, n, 4).transpose(0, 2, 1, 3, 4))


def _as_image(A, plan: TransformPlan2D) -> np.ndarray:
    if isinstance(A, QMatrix):
        A = A.as_array()
    A = as_quaternion_array(A)
    if A.ndim != 3 or A.shape[:2] != plan.shape:
        raise DimensionMismatch(f"expected a {plan.shape[0]}x{plan.shape[1]} image, "
                                f"got shape {A.shape[:-1]}")
    return A


def forward_2d(plan: TransformPlan2D, A, method: str = "fft") -> Decomposition2D:
    A = _as_image(A, plan)
    m, n = plan.shape
    if method == "matrix":
        B = plan.row_plan.W @ QMatrix.from_array(A) @ plan.col_plan.W.H
        return Decomposition2D.from_stacked(B, m, n)
    if method != "fft":
        raise ValueError(f"unknown method {method!r}")
    # W_col A^H: (p2+1, n, m, 4) -> (A W_col^H) as (m, p2+1, n, 4)
    right = analysis(plan.col_plan, _hermitian(A))
    right = qconj(right.transpose(2, 0, 1, 3))
    out = analysis(plan.row_plan, right)  # (p1+1, m, p2+1, n, 4)
    return Decomposition2D(out.transpose(0, 2, 1, 3, 4))


def inverse_2d(plan: TransformPlan2D, B: Decomposition2D, method: str = "fft") -> np.ndarray:
    """``W_row^H T_row B T_col W_col`` as an ``(m, n, 4)`` array."""
    if B.shape != plan.shape or B.levels != plan.levels:
        raise DimensionMismatch(f"decomposition {B.shape} with levels {B.levels} does not match "
                                f"plan {plan.shape} with levels {plan.levels}")
    m, n = plan.shape
    if method == "matrix":
        rp, cp = plan.row_plan, plan.col_plan
        left = rp.W.H @ B.stacked().scale_rows(rp.T)
        return (left.scale_cols(cp.T) @ cp.W).as_array()
    if method != "fft":
        raise ValueError(f"unknown method {method!r}")
    c = B.coeffs
    # X = B T_col W_col satisfies X^H = W_col^H T_col B^H
    bh = qconj(c.transpose(1, 3, 0, 2, 4))  # (p2+1, n, p1+1, m, 4)
    xh = synthesis(plan.col_plan, bh)        # (n, p1+1, m, 4)
    x = qconj(xh.transpose(1, 2, 0, 3))      # (p1+1, m, n, 4)
    return synthesis(plan.row_plan, x)


def diagonal_blocks(B: Decomposition2D, s: int = 0) -> list[np.ndarray]:
    """Blocks ``(j, j+s)`` for ``j = 1 .. min(p1, p2 - s)``, coarsest first."""
    p1, p2 = B.levels
    s = int(s)
    last = min(p1, p2 - s)
    if s < 0 or last < 1:
        raise InvalidShift(f"no diagonal blocks at shift {s} for levels ({p1}, {p2})")
    return [B.coeffs[j, j + s] for j in range(1, last + 1)]
