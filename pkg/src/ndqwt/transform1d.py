"""Matrix-form non-decimated quaternion wavelet transform of 1-D signals.

The transform matrix ``W`` of a length-``m`` signal with ``p`` detail levels
stacks ``p + 1`` circulant ``m x m`` blocks::

    [ coarse      ]   H_p ... H_2 H_1
    [ detail p    ]   G_p H_{p-1} ... H_1      (coarsest detail)
    [   ...       ]
    [ detail 1    ]   G_1                      (finest detail)

where ``H_l`` / ``G_l`` are circular filters with the base taps dilated by
``2**(l-1)`` (a trous). Row ``n`` of a block is row 0 circularly shifted by
``n``, so every block is described exactly by its first row, the *equivalent
filter*. ``forward_1d`` applies ``W`` through those filters with FFTs;
``TransformPlan1D.W`` materialises the dense matrix when it is wanted.

Reconstruction uses ``W^H T W = I`` with ``T`` the diagonal level weights.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DimensionMismatch, InvalidLevels
from .filters import FilterBank, ginzberg_filters
from .qlinalg import QMatrix, RealDiag
from .quaternion import as_quaternion_array, hamilton, qconj, qmul


def max_levels(m: int) -> int:
    return math.ceil(math.log2(m)) if m > 1 else 0


def default_levels(m: int) -> int:
    """``ceil(log2 m) - 1`` (at least 1), leaving a non-trivial coarse level."""
    return max(1, max_levels(m) - 1)


def _compose(taps: np.ndarray, dilation: int, equiv: np.ndarray) -> np.ndarray:
    """Equivalent filter of ``F_dilated @ E`` for circulant correlation operators.

    ``out[r] = sum_t taps[t] * equiv[r - t*dilation]`` with the tap on the left.
    """
    out = np.zeros_like(equiv)
    for t, tap in enumerate(taps):
        out += qmul(tap, np.roll(equiv, t * dilation, axis=0))
    return out


def weight_diagonal(m: int, p: int) -> np.ndarray:
    """``2m`` entries of ``2**-p``, then ``m`` each of ``2**-(p-1)`` ... ``2**-1``."""
    weights = [2.0 ** -p] + [2.0 ** -(p + 1 - b) for b in range(1, p + 1)]
    return np.repeat(weights, m)


@dataclass(frozen=True, eq=False)
class TransformPlan1D:
    m: int
    p: int
    filters: np.ndarray  # (p+1, m, 4): coarse, then details coarsest -> finest
    fb: FilterBank

    @property
    def n_blocks(self) -> int:
        return self.p + 1

    @cached_property
    def T(self) -> RealDiag:
        return RealDiag(weight_diagonal(self.m, self.p))

    @property
    def block_weights(self) -> np.ndarray:
        return self.T.diagonal[:: self.m]

    @cached_property
    def W(self) -> QMatrix:
        """Dense ``(p+1)m x m`` transform matrix."""
        m = self.m
        idx = (np.arange(m)[None, :] - np.arange(m)[:, None]) % m
        blocks = self.filters[:, idx, :]  # (p+1, m, m, 4)
        return QMatrix.from_array(blocks.reshape((self.p + 1) * m, m, 4))

    @cached_property
    def _spectra(self) -> np.ndarray:
        # (4, p+1, m//2+1): one rfft per quaternion component of each filter
        return np.fft.rfft(np.moveaxis(self.filters, -1, 0), axis=-1)

    @cached_property
    def _adjoint_spectra(self) -> np.ndarray:
        return np.fft.rfft(np.moveaxis(qconj(self.filters), -1, 0), axis=-1)


def build_plan_1d(m: int, p: int | None = None, fb: FilterBank | None = None) -> TransformPlan1D:
    m = int(m)
    if m < 2:
        raise InvalidLevels(f"signal length must be at least 2, got {m}")
    if p is None:
        p = default_levels(m)
    p = int(p)
    if not 1 <= p <= max_levels(m):
        raise InvalidLevels(f"levels must be in 1..{max_levels(m)} for length {m}, got {p}")
    fb = fb or ginzberg_filters()

    equiv = np.zeros((m, 4))
    equiv[0, 0] = 1.0
    details = []
    for level in range(1, p + 1):
        dilation = 2 ** (level - 1)
        details.append(_compose(fb.highpass, dilation, equiv))
        equiv = _compose(fb.lowpass, dilation, equiv)
    filters = np.stack([equiv] + details[::-1])
    filters.setflags(write=False)
    return TransformPlan1D(m=m, p=p, filters=filters, fb=fb)


@dataclass(frozen=True, eq=False)
class Decomposition1D:
    """Coarse coefficients plus ``p`` detail levels, each of length ``m``.

    ``details[0]`` is the coarsest detail level and ``details[-1]`` the finest.
    """

    coarse: np.ndarray   # (m, 4)
    details: np.ndarray  # (p, m, 4)

    def __post_init__(self):
        coarse = np.asarray(self.coarse, dtype=float)
        details = np.asarray(self.details, dtype=float)
        if coarse.ndim != 2 or coarse.shape[1] != 4:
            raise DimensionMismatch(f"coarse must be (m, 4), got {coarse.shape}")
        if details.ndim != 3 or details.shape[1:] != coarse.shape:
            raise DimensionMismatch(f"details must be (p, m, 4), got {details.shape}")
        object.__setattr__(self, "coarse", coarse)
        object.__setattr__(self, "details", details)

    @property
    def m(self) -> int:
        return self.coarse.shape[0]

    @property
    def p(self) -> int:
        return self.details.shape[0]

    def stacked(self) -> np.ndarray:
        """``((p+1) m, 4)`` vector in the row order of ``W``."""
        return np.concatenate([self.coarse[None], self.details]).reshape(-1, 4)

    @classmethod
    def from_stacked(cls, d, m: int) -> "Decomposition1D":
        d = np.asarray(d, dtype=float)
        if d.ndim != 2 or d.shape[1] != 4 or d.shape[0] % m:
            raise DimensionMismatch(f"stacked vector of shape {d.shape} does not split into blocks of {m}")
        blocks = d.reshape(-1, m, 4)
        return cls(coarse=blocks[0], details=blocks[1:])

    def subband(self, level: int) -> np.ndarray:
        """Level 0 is the coarse band, levels 1..p the details coarsest -> finest."""
        return self.coarse if level == 0 else self.details[level - 1]


def _as_signal(y, m: int) -> np.ndarray:
    y = as_quaternion_array(y)
    if y.shape != (m, 4):
        raise DimensionMismatch(f"expected a signal of length {m}, got shape {y.shape[:-1]}")
    return y


def analysis(plan: TransformPlan1D, x: np.ndarray) -> np.ndarray:
    """Apply ``W`` along axis 0 of an ``(m, *batch, 4)`` array.

    Returns ``(p+1, m, *batch, 4)``: one block per row block of ``W``.
    """
    batch = x.shape[1:-1]
    comps = np.moveaxis(x, (-1, 0), (0, -1))  # (4, *batch, m)
    spec_x = np.fft.rfft(comps, axis=-1)[:, None]
    filt = plan._spectra.reshape(4, plan.p + 1, *(1,) * len(batch), -1)
    # out[n] = sum_s e[s] * x[n+s]  ->  conj(E_hat) * X_hat per component pair
    prod = hamilton(np.conj(filt), spec_x)
    out = np.stack([np.fft.irfft(c, n=plan.m, axis=-1) for c in prod], axis=-1)
    return np.moveaxis(out, -2, 1)


def synthesis(plan: TransformPlan1D, blocks: np.ndarray) -> np.ndarray:
    """``W^H T`` applied to ``(p+1, m, *batch, 4)`` blocks; returns ``(m, *batch, 4)``."""
    batch = blocks.shape[2:-1]
    weights = plan.block_weights.reshape(-1, *(1,) * (len(batch) + 2))
    comps = np.moveaxis(blocks * weights, (-1, 1), (0, -1))  # (4, p+1, *batch, m)
    spec_x = np.fft.rfft(comps, axis=-1)
    filt = plan._adjoint_spectra.reshape(4, plan.p + 1, *(1,) * len(batch), -1)
    # (W_b^H x)[a] = sum_s conj(e_b[s]) * x[a-s]: a circular convolution
    prod = hamilton(filt, spec_x)
    out = np.stack([np.fft.irfft(c.sum(axis=0), n=plan.m, axis=-1) for c in prod], axis=-1)
    return np.moveaxis(out, -2, 0)


def forward_1d(plan: TransformPlan1D, y, method: str = "fft") -> Decomposition1D:
    """``d = W y``; real samples are embedded with zero imaginary parts.

    ``method="matrix"`` forms the product with the dense ``plan.W`` instead of
    the FFT route; both compute the same linear map.
    """
    y = _as_signal(y, plan.m)
    if method == "matrix":
        d = (plan.W @ QMatrix.column(y)).as_array()[:, 0, :]
        return Decomposition1D.from_stacked(d, plan.m)
    if method != "fft":
        raise ValueError(f"unknown method {method!r}")
    out = analysis(plan, y)
    return Decomposition1D(coarse=out[0], details=out[1:])


def inverse_1d(plan: TransformPlan1D, d: Decomposition1D, method: str = "fft") -> np.ndarray:
    """``y = W^H T d``; returns an ``(m, 4)`` quaternion array."""
    if d.m != plan.m or d.p != plan.p:
        raise DimensionMismatch(f"decomposition (m={d.m}, p={d.p}) does not match plan "
                                f"(m={plan.m}, p={plan.p})")
    if method == "matrix":
        col = QMatrix.column(d.stacked()).scale_rows(plan.T)
        return (plan.W.H @ col).as_array()[:, 0, :]
    if method != "fft":
        raise ValueError(f"unknown method {method!r}")
    return synthesis(plan, np.concatenate([d.coarse[None], d.details]))
