"""Quaternion arithmetic, modulus and the polar (modulus + three phases) form.

Two layers live here. ``Quaternion`` is a small immutable value type for
scalar work. The ``q*`` functions operate on float arrays whose last axis
holds the four components ``(q0, q1, q2, q3)`` = real, i, j, k; every
transform in the package stores coefficients that way.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ZeroQuaternion

# |psi -/+ pi/4| below this selects the gimbal-lock branch of the phase extraction.
PSI_EDGE_TOL = 1e-12
# Componentwise tolerance when testing whether the reconstruction equals -q.
SIGN_FLIP_TOL = 1e-9


def hamilton(a, b):
    """Hamilton product of two 4-sequences of array-likes.

    Works on anything supporting elementwise ``*``, ``+`` and ``-``, which
    lets the same table multiply plain components, component planes of a
    matrix, or their Fourier transforms.
    """
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    return (
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    )


def as_quaternion_array(x) -> np.ndarray:
    """Coerce ``x`` to a float array with a trailing axis of length 4.

    Real input (any shape) is embedded with zero imaginary parts. An input
    already ending in an axis of 4 is taken as quaternion-valued, so a real
    array whose last dimension happens to be 4 must be embedded explicitly
    with :func:`embed_real`.
    """
    if isinstance(x, Quaternion):
        return x.as_array()
    if isinstance(x, (list, tuple)) and x and isinstance(x[0], Quaternion):
        return np.array([q.as_array() for q in x])
    arr = np.asarray(x, dtype=float)
    if arr.ndim >= 1 and arr.shape[-1] == 4:
        return arr
    return embed_real(arr)


def embed_real(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape + (4,))
    out[..., 0] = x
    return out


def qmul(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return np.stack(hamilton(np.moveaxis(a, -1, 0), np.moveaxis(b, -1, 0)), axis=-1)


def qconj(q) -> np.ndarray:
    q = np.array(q, dtype=float)
    q[..., 1:] *= -1.0
    return q


def qabs(q) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    return np.sqrt(np.sum(q * q, axis=-1))


def _exp_factors(phi, theta, psi):
    zero = np.zeros_like(phi)
    ei = np.stack([np.cos(phi), np.sin(phi), zero, zero], axis=-1)
    ej = np.stack([np.cos(theta), zero, np.sin(theta), zero], axis=-1)
    ek = np.stack([np.cos(psi), zero, zero, np.sin(psi)], axis=-1)
    return ei, ej, ek


def qfrom_polar(modulus, phi, theta, psi) -> np.ndarray:
    """``modulus * e^{i phi} e^{k psi} e^{j theta}``, broadcast over inputs.

    The factor order (i, then k, then j) is the one under which the phase
    extraction in :func:`qphases` is an exact inverse; with the j and k
    factors swapped the extracted angles do not reproduce ``q``.
    """
    modulus, phi, theta, psi = np.broadcast_arrays(
        *(np.asarray(v, dtype=float) for v in (modulus, phi, theta, psi)))
    ei, ej, ek = _exp_factors(phi, theta, psi)
    return modulus[..., None] * qmul(qmul(ei, ek), ej)


def qphases(q):
    """Vectorised phase extraction; returns ``(phi, theta, psi)`` arrays.

    Each quaternion is normalised first. Raises :class:`ZeroQuaternion` if any
    input has zero modulus.
    """
    q = np.asarray(q, dtype=float)
    norm = qabs(q)
    if np.any(norm == 0.0):
        raise ZeroQuaternion("phases are undefined for a zero quaternion")
    u = q / norm[..., None]
    a, b, c, d = np.moveaxis(u, -1, 0)

    # z1 = |z1| e^{i(phi-theta)}, z2 = |z2| e^{i(phi+theta)}. The atan2 arguments
    # below are the textbook expressions in factored form, e.g.
    # z1*z2 = (a^2-b^2+c^2-d^2) + 2i(ab+cd); the factoring keeps phi-theta
    # accurate when z2 -> 0 near gimbal lock.
    z1 = (a + d) + 1j * (b - c)
    z2 = (a - d) + 1j * (b + c)

    # -arcsin(x)/2 with cos(2 psi) = |z1||z2| evaluated without cancellation.
    psi = 0.5 * np.arctan2(2.0 * (a * d - b * c), np.abs(z1) * np.abs(z2))
    w = z1 * z2
    phi = 0.5 * np.arctan2(w.imag, w.real)
    w = np.conj(z1) * z2
    theta = 0.5 * np.arctan2(w.imag, w.real)

    # psi = +/- pi/4: only phi -/+ theta is identifiable, pin theta to zero.
    edge = np.abs(np.abs(psi) - math.pi / 4) < PSI_EDGE_TOL
    if np.any(edge):
        w = z1 * z1 + z2 * z2  # 2 (a^2-b^2-c^2+d^2) + 4i(ab-cd)
        phi = np.where(edge, 0.5 * np.arctan2(w.imag, w.real), phi)
        theta = np.where(edge, 0.0, theta)

    rebuilt = qfrom_polar(np.ones_like(phi), phi, theta, psi)
    flipped = np.all(np.abs(rebuilt + u) < SIGN_FLIP_TOL, axis=-1)
    phi = np.where(flipped, np.where(phi >= 0.0, phi - math.pi, phi + math.pi), phi)
    return phi, theta, psi


class PhaseTriple(NamedTuple):
    phi: float
    theta: float
    psi: float


@dataclass(frozen=True)
class Quaternion:
    """``q0 + q1 i + q2 j + q3 k`` with finite double-precision components."""

    q0: float = 0.0
    q1: float = 0.0
    q2: float = 0.0
    q3: float = 0.0

    def __post_init__(self):
        for name in ("q0", "q1", "q2", "q3"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"quaternion component {name} is not finite: {value}")
            object.__setattr__(self, name, value)

    @classmethod
    def from_array(cls, arr) -> "Quaternion":
        a = np.asarray(arr, dtype=float).reshape(4)
        return cls(*a.tolist())

    @classmethod
    def from_polar(cls, modulus: float, phases) -> "Quaternion":
        phi, theta, psi = phases
        return cls.from_array(qfrom_polar(modulus, phi, theta, psi))

    def as_array(self) -> np.ndarray:
        return np.array([self.q0, self.q1, self.q2, self.q3])

    __array_priority__ = 10

    def __array__(self, dtype=None, copy=None):
        return self.as_array().astype(dtype) if dtype else self.as_array()

    def __iter__(self):
        yield from (self.q0, self.q1, self.q2, self.q3)

    def __add__(self, other):
        other = _coerce(other)
        return Quaternion(*(x + y for x, y in zip(self, other)))

    __radd__ = __add__

    def __neg__(self):
        return Quaternion(-self.q0, -self.q1, -self.q2, -self.q3)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion(*(x * other for x in self))
        if not isinstance(other, Quaternion):
            return NotImplemented
        return Quaternion(*hamilton(tuple(self), tuple(other)))

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return self * other
        return NotImplemented

    def __truediv__(self, other: float):
        return Quaternion(*(x / other for x in self))

    def __abs__(self) -> float:
        return math.sqrt(self.q0 ** 2 + self.q1 ** 2 + self.q2 ** 2 + self.q3 ** 2)

    def conj(self) -> "Quaternion":
        return Quaternion(self.q0, -self.q1, -self.q2, -self.q3)

    def phases(self) -> PhaseTriple:
        phi, theta, psi = qphases(self.as_array())
        return PhaseTriple(float(phi), float(theta), float(psi))

    def isclose(self, other, atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.as_array(), _coerce(other).as_array(), rtol=0, atol=atol))

    def __repr__(self):
        return f"Quaternion({self.q0!r}, {self.q1!r}i, {self.q2!r}j, {self.q3!r}k)"


def _coerce(x) -> Quaternion:
    if isinstance(x, Quaternion):
        return x
    if isinstance(x, (int, float)):
        return Quaternion(float(x))
    raise TypeError(f"cannot interpret {type(x).__name__} as a quaternion")


ONE = Quaternion(1.0)
I = Quaternion(0.0, 1.0)
J = Quaternion(0.0, 0.0, 1.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


def quat_mul(a: Quaternion, b: Quaternion) -> Quaternion:
    return _coerce(a) * _coerce(b)


def quat_conj(q: Quaternion) -> Quaternion:
    return _coerce(q).conj()


def quat_modulus(q: Quaternion) -> float:
    return abs(_coerce(q))


def quat_phases(q: Quaternion) -> PhaseTriple:
    return _coerce(q).phases()


def quat_from_polar(modulus: float, phases) -> Quaternion:
    return Quaternion.from_polar(modulus, phases)
