"""Exact simulation of fractional Brownian motion (1-D paths and 2-D fields).

Random numbers come from ``numpy.random.Generator(PCG64(seed))``; PCG64 is
portable, so a seed reproduces the same draws on every platform.

* 1-D: fractional Gaussian noise by circulant embedding of its
  autocovariance, cumulatively summed. If the embedding spectrum ever goes
  negative, a Cholesky factor of the path covariance is used instead (only
  for m <= 4096).
* 2-D: Stein's (2002) circulant embedding of a compactly supported,
  locally modified covariance, corrected to isotropic fBm. It is exact on
  the sampled grid. A direct Cholesky factor of the grid covariance is
  available for small grids (``method="cholesky"``).

All outputs are in grid units: ``Cov B(u), B(v) = (|u|^2H + |v|^2H - |u-v|^2H)/2``
with ``u, v`` integer grid positions. In 1-D, element ``t`` of the returned
path is ``B(t + 1)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EmbeddingFailure, SizeTooLarge

MAX_FIELD_SIZE = 2 ** 18
MAX_CHOLESKY_1D = 4096
MAX_CHOLESKY_2D = 4096
# Relative size of a negative circulant eigenvalue tolerated as round-off.
_EIG_RTOL = 1e-10


def make_rng(seed) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


@dataclass(frozen=True)
class FbmSpec:
    hurst: float
    shape: tuple[int, ...]
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.hurst < 1.0:
            raise ValueError(f"Hurst exponent must lie in (0, 1), got {self.hurst}")
        shape = (self.shape,) if isinstance(self.shape, int) else tuple(int(s) for s in self.shape)
        if len(shape) not in (1, 2) or min(shape) < 2:
            raise ValueError(f"shape must be m >= 2 or (m, n) with m, n >= 2, got {self.shape}")
        object.__setattr__(self, "shape", shape)


def fgn_autocovariance(hurst: float, lags) -> np.ndarray:
    h = np.abs(np.asarray(lags, dtype=float))
    a = 2.0 * hurst
    return 0.5 * (np.abs(h + 1) ** a + np.abs(h - 1) ** a - 2.0 * h ** a)


def fbm_covariance(hurst: float, s, t) -> np.ndarray:
    """Covariance of fBm at positions ``s`` and ``t`` (broadcasting; vectors allowed)."""
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    if s.ndim and s.shape[-1] == 2 and t.shape[-1:] == (2,):
        ns, nt, nd = (np.linalg.norm(s, axis=-1), np.linalg.norm(t, axis=-1),
                      np.linalg.norm(s - t, axis=-1))
    else:
        ns, nt, nd = np.abs(s), np.abs(t), np.abs(s - t)
    a = 2.0 * hurst
    return 0.5 * (ns ** a + nt ** a - nd ** a)


def generate_fbm_1d(spec: FbmSpec) -> np.ndarray:
    """Sample path ``B(1), ..., B(m)`` of standard fBm."""
    if len(spec.shape) != 1:
        raise ValueError("generate_fbm_1d needs a 1-D shape")
    m = spec.shape[0]
    rng = make_rng(spec.seed)
    row = fgn_autocovariance(spec.hurst, np.arange(m + 1))
    circ = np.concatenate([row, row[-2:0:-1]])  # length 2m
    eig = np.fft.fft(circ).real
    if eig.min() < -_EIG_RTOL * eig.max():
        if m > MAX_CHOLESKY_1D:
            raise EmbeddingFailure(f"negative circulant eigenvalue {eig.min():.3g} for m={m}")
        return _fbm_1d_cholesky(spec.hurst, m, rng)
    size = circ.size
    z = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    noise = np.fft.fft(np.sqrt(np.clip(eig, 0.0, None) / size) * z)[:m].real
    return np.cumsum(noise)


def _fbm_1d_cholesky(hurst, m, rng):
    t = np.arange(1, m + 1, dtype=float)
    cov = fbm_covariance(hurst, t[:, None], t[None, :])
    return np.linalg.cholesky(cov) @ rng.standard_normal(m)


def _stein_parameters(alpha: float, radius: float):
    if alpha <= 1.5:
        beta, c2 = 0.0, alpha / 2.0
        c0 = 1.0 - alpha / 2.0
    else:
        beta = alpha * (2.0 - alpha) / (3.0 * radius * (radius ** 2 - 1.0))
        c2 = (alpha - beta * (radius - 1.0) ** 2 * (radius + 2.0)) / 2.0
        c0 = beta * (radius - 1.0) ** 3 + 1.0 - c2
    return beta, c0, c2


def _stein_rho(r, alpha, radius, beta, c0, c2):
    out = np.zeros_like(r)
    inner = r <= 1.0
    out[inner] = c0 - r[inner] ** alpha + c2 * r[inner] ** 2
    if beta:
        mid = (r > 1.0) & (r <= radius)
        out[mid] = beta * (radius - r[mid]) ** 3 / r[mid]
    return out


def generate_fbm_2d(spec: FbmSpec, method: str = "embedding") -> np.ndarray:
    """Isotropic 2-D fBm on the ``m x n`` grid ``{0..m-1} x {0..n-1}``; ``B(0, 0) = 0``."""
    if len(spec.shape) != 2:
        raise ValueError("generate_fbm_2d needs a 2-D shape")
    m, n = spec.shape
    if m * n > MAX_FIELD_SIZE:
        raise SizeTooLarge(f"{m}x{n} exceeds the {MAX_FIELD_SIZE}-point limit")
    rng = make_rng(spec.seed)
    if method == "cholesky":
        if m * n > MAX_CHOLESKY_2D:
            raise SizeTooLarge(f"{m}x{n} too large for direct factorisation "
                               f"(limit {MAX_CHOLESKY_2D} points)")
        return _fbm_2d_cholesky(spec.hurst, m, n, rng)
    if method != "embedding":
        raise ValueError(f"unknown method {method!r}")
    return _fbm_2d_stein(spec.hurst, m, n, rng)


def _fbm_2d_cholesky(hurst, m, n, rng):
    grid = np.stack(np.meshgrid(np.arange(m), np.arange(n), indexing="ij"), axis=-1).reshape(-1, 2)
    cov = fbm_covariance(hurst, grid[:, None, :], grid[None, :, :])
    # B(0,0) = 0 makes the matrix singular; factor the remaining points.
    chol = np.linalg.cholesky(cov[1:, 1:])
    field = np.zeros(m * n)
    field[1:] = chol @ rng.standard_normal(m * n - 1)
    return field.reshape(m, n)


def _fbm_2d_stein(hurst, m, n, rng):
    alpha = 2.0 * hurst
    radius = 2.0
    beta, c0, c2 = _stein_parameters(alpha, radius)
    side = max(m, n)
    # Output points fill [0, 1/sqrt(2)]^2 so every pairwise distance is <= 1.
    step = (1.0 / math.sqrt(2.0)) / (side - 1)
    half = math.ceil(radius / step)
    size = 2 * half  # torus of side 2*radius
    k = np.arange(size)
    k = np.minimum(k, size - k) * step
    dist = np.sqrt(k[:, None] ** 2 + k[None, :] ** 2)
    circ = _stein_rho(dist, alpha, radius, beta, c0, c2)
    eig = np.fft.fft2(circ).real
    if eig.min() < -_EIG_RTOL * eig.max():
        raise EmbeddingFailure(f"negative embedding eigenvalue {eig.min():.3g}")
    z = rng.standard_normal((size, size)) + 1j * rng.standard_normal((size, size))
    field = np.fft.fft2(np.sqrt(np.clip(eig, 0.0, None)) / size * z)[:m, :n].real
    u = np.arange(m)[:, None] * step
    v = np.arange(n)[None, :] * step
    corr = rng.standard_normal(2)
    field = field - field[0, 0] + math.sqrt(2.0 * c2) * (u * corr[0] + v * corr[1])
    # covariance is now |u|^a + |v|^a - |u-v|^a: halve, then rescale to grid units
    return field / math.sqrt(2.0) * step ** (-hurst)
