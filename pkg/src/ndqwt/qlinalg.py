"""Dense quaternion matrices.

A :class:`QMatrix` keeps its four component planes as one real array of shape
``(4, rows, cols)``, so a quaternion matrix product is sixteen real BLAS
products combined with the Hamilton sign table. Vectors are plain
``(m, 4)`` arrays throughout the package (see :mod:`ndqwt.quaternion`).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .quaternion import Quaternion, as_quaternion_array


def quat_to_real4(q) -> np.ndarray:
    """Left-multiplication matrix of ``q``: ``M(q) @ p == q * p`` on 4-vectors.

    The first column is ``(q0, q1, q2, q3)``; ``M(a) @ M(b) == M(a*b)`` and
    ``M(conj(q)) == M(q).T``.
    """
    a, b, c, d = as_quaternion_array(q).reshape(4)
    return np.array([
        [a, -b, -c, -d],
        [b, a, -d, c],
        [c, d, a, -b],
        [d, -c, b, a],
    ])


def left_mult_blocks(q) -> np.ndarray:
    """Vectorised :func:`quat_to_real4`: ``(..., 4)`` -> ``(..., 4, 4)``."""
    q = np.asarray(q, dtype=float)
    a, b, c, d = np.moveaxis(q, -1, 0)
    rows = [
        [a, -b, -c, -d],
        [b, a, -d, c],
        [c, d, a, -b],
        [d, -c, b, a],
    ]
    return np.stack([np.stack(r, axis=-1) for r in rows], axis=-2)


@dataclass(frozen=True)
class RealDiag:
    """Positive real diagonal matrix."""

    diagonal: np.ndarray

    def __post_init__(self):
        diag = np.asarray(self.diagonal, dtype=float).reshape(-1)
        if diag.size == 0 or np.any(diag <= 0) or not np.all(np.isfinite(diag)):
            raise ValueError("RealDiag entries must be finite and strictly positive")
        diag.setflags(write=False)
        object.__setattr__(self, "diagonal", diag)

    @property
    def dimension(self) -> int:
        return self.diagonal.size

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diagonal)


class QMatrix:
    """Immutable dense quaternion matrix."""

    __slots__ = ("_parts",)

    def __init__(self, parts):
        parts = np.array(parts, dtype=float)
        if parts.ndim != 3 or parts.shape[0] != 4:
            raise ValueError(f"expected component planes of shape (4, r, c), got {parts.shape}")
        if not np.all(np.isfinite(parts)):
            raise ValueError("QMatrix entries must be finite")
        parts.setflags(write=False)
        self._parts = parts

    @classmethod
    def _wrap(cls, parts: np.ndarray) -> "QMatrix":
        out = object.__new__(cls)
        parts.setflags(write=False)
        out._parts = parts
        return out

    @classmethod
    def from_array(cls, arr) -> "QMatrix":
        """From an ``(r, c, 4)`` quaternion array or an ``(r, c)`` real array."""
        arr = np.asarray(arr, dtype=float)
        if arr.ndim == 2:
            parts = np.zeros((4,) + arr.shape)
            parts[0] = arr
            return cls(parts)
        if arr.ndim == 3 and arr.shape[-1] == 4:
            return cls(np.moveaxis(arr, -1, 0))
        raise ValueError(f"cannot build a QMatrix from shape {arr.shape}")

    @classmethod
    def from_entries(cls, rows) -> "QMatrix":
        """From nested lists of :class:`Quaternion` (or anything array-like of length 4)."""
        return cls.from_array(np.array([[as_quaternion_array(q) for q in row] for row in rows]))

    @classmethod
    def column(cls, vec) -> "QMatrix":
        return cls.from_array(as_quaternion_array(vec)[:, None, :])

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        parts = np.zeros((4, n, n))
        parts[0] = np.eye(n)
        return cls._wrap(parts)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QMatrix":
        return cls._wrap(np.zeros((4, rows, cols)))

    @property
    def parts(self) -> np.ndarray:
        return self._parts

    @property
    def shape(self) -> tuple[int, int]:
        return self._parts.shape[1:]

    @property
    def rows(self) -> int:
        return self._parts.shape[1]

    @property
    def cols(self) -> int:
        return self._parts.shape[2]

    def as_array(self) -> np.ndarray:
        """``(rows, cols, 4)`` view of the entries."""
        return np.moveaxis(self._parts, 0, -1)

    def entry(self, r: int, c: int) -> Quaternion:
        return Quaternion(*self._parts[:, r, c].tolist())

    def __getitem__(self, key) -> "QMatrix":
        rs, cs = key
        return QMatrix._wrap(self._parts[:, rs, cs])

    @property
    def H(self) -> "QMatrix":
        """Hermitian (conjugate) transpose."""
        p = np.transpose(self._parts, (0, 2, 1)).copy()
        p[1:] *= -1.0
        return QMatrix._wrap(p)

    def __matmul__(self, other) -> "QMatrix":
        if isinstance(other, QMatrix):
            if self.cols != other.rows:
                raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
            return QMatrix._wrap(_qmatmul(self._parts, other._parts))
        other = np.asarray(other, dtype=float)
        if other.ndim == 2:
            # real right factor: four real products
            if self.cols != other.shape[0]:
                raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
            return QMatrix._wrap(self._parts @ other)
        return NotImplemented

    def __rmatmul__(self, other) -> "QMatrix":
        other = np.asarray(other, dtype=float)
        if other.ndim == 2:
            if other.shape[1] != self.rows:
                raise DimensionMismatch(f"cannot multiply {other.shape} by {self.shape}")
            return QMatrix._wrap(other @ self._parts)
        return NotImplemented

    def __add__(self, other: "QMatrix") -> "QMatrix":
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot add {self.shape} and {other.shape}")
        return QMatrix._wrap(self._parts + other._parts)

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot subtract {other.shape} from {self.shape}")
        return QMatrix._wrap(self._parts - other._parts)

    def __mul__(self, scalar: float) -> "QMatrix":
        return QMatrix._wrap(self._parts * float(scalar))

    __rmul__ = __mul__

    def scale_rows(self, diag: RealDiag) -> "QMatrix":
        """``diag @ self`` for a real diagonal, without quaternion products."""
        if diag.dimension != self.rows:
            raise DimensionMismatch(f"diagonal of size {diag.dimension} vs {self.rows} rows")
        return QMatrix._wrap(self._parts * diag.diagonal[None, :, None])

    def scale_cols(self, diag: RealDiag) -> "QMatrix":
        """``self @ diag`` for a real diagonal."""
        if diag.dimension != self.cols:
            raise DimensionMismatch(f"diagonal of size {diag.dimension} vs {self.cols} columns")
        return QMatrix._wrap(self._parts * diag.diagonal[None, None, :])

    def to_real(self) -> np.ndarray:
        """Block real embedding: entry ``(r, c)`` becomes ``quat_to_real4`` of it."""
        blocks = left_mult_blocks(self.as_array())  # (r, c, 4, 4)
        r, c = self.shape
        return blocks.transpose(0, 2, 1, 3).reshape(4 * r, 4 * c)

    def allclose(self, other: "QMatrix", atol: float = 1e-12) -> bool:
        return self.shape == other.shape and bool(
            np.allclose(self._parts, other._parts, rtol=0.0, atol=atol))

    def max_abs_diff(self, other: "QMatrix") -> float:
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} vs {other.shape}")
        return float(np.max(np.abs(self._parts - other._parts), initial=0.0))

    def __repr__(self):
        return f"QMatrix(shape={self.shape})"


def _qmatmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Hamilton product of component-plane stacks, left factor kept on the left."""
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    out = np.empty((4, a.shape[1], b.shape[2]))
    out[0] = a0 @ b0 - a1 @ b1 - a2 @ b2 - a3 @ b3
    out[1] = a0 @ b1 + a1 @ b0 + a2 @ b3 - a3 @ b2
    out[2] = a0 @ b2 - a1 @ b3 + a2 @ b0 + a3 @ b1
    out[3] = a0 @ b3 + a1 @ b2 - a2 @ b1 + a3 @ b0
    return out


def qmat_mul(a: QMatrix, b: QMatrix) -> QMatrix:
    return a @ b


def qmat_hermitian(a: QMatrix) -> QMatrix:
    return a.H
