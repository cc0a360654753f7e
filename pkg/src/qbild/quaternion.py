"""Quaternion scalars, similarity classes and their complex representatives.

A quaternion ``q = w + xi + yj + zk`` is stored as four floats.  Arrays of
quaternions use a trailing axis of length 4 in the same ``[w, x, y, z]``
order, which is also the serialized form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DEFAULT_TOL = 1e-10


def scaled_tol(tol, magnitude):
    """Absolute-plus-relative tolerance ``tol * (1 + magnitude)``."""
    return tol * (1.0 + abs(magnitude))


@dataclass(frozen=True)
class Quaternion:
    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def from_array(cls, a):
        a = np.asarray(a, dtype=float)
        if a.shape != (4,):
            raise ValueError(f"expected 4 components, got shape {a.shape}")
        return cls(*(float(v) for v in a))

    @classmethod
    def from_complex(cls, c):
        c = complex(c)
        return cls(c.real, c.imag, 0.0, 0.0)

    def to_array(self):
        return np.array([self.w, self.x, self.y, self.z])

    def to_list(self):
        return [self.w, self.x, self.y, self.z]

    @property
    def real(self):
        return self.w

    @property
    def imag(self):
        """Imaginary part as the pure quaternion ``xi + yj + zk``."""
        return Quaternion(0.0, self.x, self.y, self.z)

    @property
    def imag_norm(self):
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def __add__(self, other):
        other = _coerce(other)
        return Quaternion(self.w + other.w, self.x + other.x, self.y + other.y, self.z + other.z)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        return Quaternion(self.w - other.w, self.x - other.x, self.y - other.y, self.z - other.z)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __neg__(self):
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other):
        return mul(self, _coerce(other))

    def __rmul__(self, other):
        return mul(_coerce(other), self)

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion(self.w / other, self.x / other, self.y / other, self.z / other)
        return mul(self, inv(other))

    def __abs__(self):
        return norm(self)

    def __repr__(self):
        return f"Quaternion({self.w!r}, {self.x!r}, {self.y!r}, {self.z!r})"


def _coerce(v):
    if isinstance(v, Quaternion):
        return v
    if isinstance(v, (int, float, np.floating, np.integer)):
        return Quaternion(float(v))
    if isinstance(v, (complex, np.complexfloating)):
        return Quaternion.from_complex(v)
    raise TypeError(f"cannot interpret {type(v).__name__} as a quaternion")


ONE = Quaternion(1.0)
I = Quaternion(0.0, 1.0)
J = Quaternion(0.0, 0.0, 1.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


def mul(a, b):
    """Hamilton product ``a*b``."""
    return Quaternion(
        a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
        a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
        a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
        a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
    )


def conj(q):
    return Quaternion(q.w, -q.x, -q.y, -q.z)


def norm(q):
    return math.sqrt(q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z)


def inv(q):
    n2 = q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z
    if n2 == 0.0:
        raise ZeroDivisionError("quaternion inverse of zero")
    return Quaternion(q.w / n2, -q.x / n2, -q.y / n2, -q.z / n2)


@dataclass(frozen=True)
class SimilarityClass:
    """Class ``[q]`` identified by ``(Re q, |Im q|)``.

    The canonical representative is the complex number ``re + im_norm*i``
    in the closed upper half-plane.
    """

    re: float
    im_norm: float

    def __post_init__(self):
        if self.im_norm < 0:
            raise ValueError("im_norm must be nonnegative")

    @property
    def complex(self):
        return complex(self.re, self.im_norm)

    @property
    def modulus(self):
        return math.hypot(self.re, self.im_norm)

    @classmethod
    def from_complex(cls, c):
        c = complex(c)
        return cls(c.real, abs(c.imag))


def similar(q1, q2, tol=DEFAULT_TOL):
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    return abs(q1.w - q2.w) <= tol and abs(q1.imag_norm - q2.imag_norm) <= tol


def class_rep(q):
    return SimilarityClass(q.w, q.imag_norm)


def embed_class(c, u, tol=DEFAULT_TOL):
    """Member ``c.re + c.im_norm*u`` of the class ``c``; ``u`` must be a unit pure quaternion."""
    if abs(u.w) > tol or abs(norm(u) - 1.0) > tol:
        raise ValueError("u must be a unit pure quaternion")
    return Quaternion(c.re, c.im_norm * u.x, c.im_norm * u.y, c.im_norm * u.z)


# Vectorized helpers on arrays with a trailing axis of length 4.

def qmul_array(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    aw, ax, ay, az = np.moveaxis(a, -1, 0)
    bw, bx, by, bz = np.moveaxis(b, -1, 0)
    return np.stack(
        [
            aw * bw - ax * bx - ay * by - az * bz,
            aw * bx + ax * bw + ay * bz - az * by,
            aw * by - ax * bz + ay * bw + az * bx,
            aw * bz + ax * by - ay * bx + az * bw,
        ],
        axis=-1,
    )


def qconj_array(a):
    out = np.array(a, dtype=float, copy=True)
    out[..., 1:] *= -1.0
    return out


def class_rep_array(a):
    """Canonical upper half-plane representatives of an array of quaternions."""
    a = np.asarray(a, dtype=float)
    return a[..., 0] + 1j * np.linalg.norm(a[..., 1:], axis=-1)
