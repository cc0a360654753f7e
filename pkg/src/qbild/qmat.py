"""Right-linear quaternionic matrices and vectors.

Every quaternion is split as ``a = z1 + z2*j`` with complex ``z1 = w + x*i``
and ``z2 = y + z*i``.  A matrix is then ``A = X + Y*j`` and a vector
``u = x + y*j``.  Matrix entries act on the left of coordinates, scalars act
on the right of vectors.

The complex adjoint matrix is

    chi(A) = [[X, -Y], [conj(Y), conj(X)]]

acting on the stacked vector ``(x, conj(y))``.  With this convention
``stack(A u) = chi(A) stack(u)``, ``chi(AB) = chi(A) chi(B)`` and
``chi(A*) = chi(A)^H``, so the Euclidean norm of the stacked vector is the
quaternionic norm of ``u``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .quaternion import DEFAULT_TOL, Quaternion, qconj_array, qmul_array

GS_MAX_RETRIES = 8


def to_pair(a):
    """Quaternion array (..., 4) -> complex parts ``(z1, z2)`` with ``a = z1 + z2 j``."""
    a = np.asarray(a, dtype=float)
    return a[..., 0] + 1j * a[..., 1], a[..., 2] + 1j * a[..., 3]


def from_pair(z1, z2):
    z1 = np.asarray(z1, dtype=complex)
    z2 = np.asarray(z2, dtype=complex)
    return np.stack([z1.real, z1.imag, z2.real, z2.imag], axis=-1)


@dataclass(frozen=True)
class ComplexSplit:
    X: np.ndarray
    Y: np.ndarray


class QMatrix:
    """Square quaternionic matrix, immutable after construction."""

    def __init__(self, entries):
        entries = np.array(entries, dtype=float)
        if entries.ndim != 3 or entries.shape[0] != entries.shape[1] or entries.shape[2] != 4:
            raise ValueError(f"entries must have shape (n, n, 4), got {entries.shape}")
        if entries.shape[0] < 1:
            raise ValueError("matrix dimension must be at least 1")
        entries.setflags(write=False)
        self._entries = entries

    @property
    def entries(self):
        return self._entries

    @property
    def n(self):
        return self._entries.shape[0]

    @classmethod
    def from_complex(cls, X, Y=None):
        X = np.atleast_2d(np.asarray(X, dtype=complex))
        Y = np.zeros_like(X) if Y is None else np.atleast_2d(np.asarray(Y, dtype=complex))
        if X.shape != Y.shape or X.shape[0] != X.shape[1]:
            raise ValueError("X and Y must be square and of equal shape")
        return cls(from_pair(X, Y))

    @classmethod
    def from_chi(cls, M):
        M = np.asarray(M, dtype=complex)
        n = M.shape[0] // 2
        return cls.from_complex(M[:n, :n], np.conj(M[n:, :n]))

    @classmethod
    def identity(cls, n):
        return cls.from_complex(np.eye(n))

    @classmethod
    def diag(cls, values):
        qs = [v if isinstance(v, Quaternion) else Quaternion.from_complex(v) for v in values]
        n = len(qs)
        entries = np.zeros((n, n, 4))
        for k, q in enumerate(qs):
            entries[k, k] = q.to_array()
        return cls(entries)

    def __getitem__(self, idx):
        p, q = idx
        return Quaternion.from_array(self._entries[p, q])

    def split(self):
        return split(self)

    def chi(self):
        return chi(self)

    def adjoint(self):
        return adjoint(self)

    def __matmul__(self, other):
        if isinstance(other, QMatrix):
            return QMatrix.from_chi(chi(self) @ chi(other))
        return apply(self, other)

    def __add__(self, other):
        return QMatrix(self._entries + other.entries)

    def __sub__(self, other):
        return QMatrix(self._entries - other.entries)

    def __mul__(self, c):
        # real scalars only; they are central
        return QMatrix(self._entries * float(c))

    __rmul__ = __mul__

    def __neg__(self):
        return QMatrix(-self._entries)

    def __eq__(self, other):
        return isinstance(other, QMatrix) and np.array_equal(self._entries, other.entries)

    def __hash__(self):
        return hash(self._entries.tobytes())

    def __repr__(self):
        return f"QMatrix(n={self.n})"


def split(A):
    X, Y = to_pair(A.entries)
    return ComplexSplit(X, Y)


def chi(A):
    X, Y = to_pair(A.entries)
    return np.block([[X, -Y], [np.conj(Y), np.conj(X)]])


def stack(u):
    """Quaternion vector (n, 4) -> complex vector ``(x, conj(y))`` of length 2n."""
    x, y = to_pair(u)
    return np.concatenate([x, np.conj(y)], axis=-1)


def unstack(v):
    v = np.asarray(v, dtype=complex)
    n = v.shape[-1] // 2
    return from_pair(v[..., :n], np.conj(v[..., n:]))


def apply(A, u):
    u = np.asarray(u, dtype=float)
    if u.shape != (A.n, 4):
        raise ValueError(f"vector shape {u.shape} does not match matrix dimension {A.n}")
    return unstack(chi(A) @ stack(u))


def right_scale(u, q):
    """``u*q`` for a quaternion vector ``u`` and scalar ``q``."""
    q = q.to_array() if isinstance(q, Quaternion) else np.asarray(q, dtype=float)
    return qmul_array(u, np.broadcast_to(q, np.shape(u)))


def inner(x, y):
    """``<x, y> = sum_n conj(y_n) x_n``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValueError("dimension mismatch")
    return Quaternion.from_array(qmul_array(qconj_array(y), x).sum(axis=0))


def vector_norm(u):
    return float(np.linalg.norm(np.asarray(u, dtype=float)))


def adjoint(A):
    return QMatrix(np.transpose(qconj_array(A.entries), (1, 0, 2)))


def _close(M, N, tol, scale):
    return bool(np.max(np.abs(M - N), initial=0.0) <= tol * (1.0 + scale))


def is_normal(A, tol=DEFAULT_TOL):
    M = chi(A)
    H = M.conj().T
    return _close(M @ H, H @ M, tol, np.linalg.norm(M, 2) ** 2)


def is_unitary(A, tol=DEFAULT_TOL):
    M = chi(A)
    return _close(M.conj().T @ M, np.eye(2 * A.n), tol, 1.0)


def is_self_adjoint(A, tol=DEFAULT_TOL):
    return _close(A.entries, adjoint(A).entries, tol, op_norm(A))


def is_complex_operator(A, tol=DEFAULT_TOL):
    """True if every entry lies in C in the given standard basis."""
    return bool(np.max(np.abs(A.entries[..., 2:]), initial=0.0) <= tol * (1.0 + op_norm(A)))


def in_basis(A, U):
    """Matrix of ``A`` in the orthonormal basis formed by the columns of unitary ``U``: ``U* A U``."""
    return adjoint(U) @ A @ U


def op_norm(A):
    return float(np.linalg.norm(chi(A), 2))


def gram_schmidt(vectors, drop_tol=None):
    """Right-coefficient Gram-Schmidt on quaternion vectors of shape (n, 4).

    With ``drop_tol`` set, vectors whose residual norm falls below it are
    skipped; otherwise a vanishing residual raises ``np.linalg.LinAlgError``.
    """
    basis = []
    for v in vectors:
        r = np.array(v, dtype=float)
        for _ in range(2):  # re-orthogonalize once for stability
            for e in basis:
                r = r - right_scale(e, inner(r, e))
        nr = vector_norm(r)
        if drop_tol is not None:
            if nr <= drop_tol:
                continue
        elif nr <= 1e-12 * max(1.0, vector_norm(v)):
            raise np.linalg.LinAlgError("linearly dependent vectors in Gram-Schmidt")
        basis.append(r / nr)
    return basis


def random_unitary(n, seed=None):
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = np.random.default_rng(seed)
    for _ in range(GS_MAX_RETRIES):
        G = rng.standard_normal((n, n, 4))
        try:
            cols = gram_schmidt([G[:, k] for k in range(n)])
        except np.linalg.LinAlgError:
            continue
        return QMatrix(np.stack(cols, axis=1))
    raise np.linalg.LinAlgError(f"no nonsingular draw after {GS_MAX_RETRIES} attempts")


def random_matrix(n, seed=None, scale=1.0):
    rng = np.random.default_rng(seed)
    return QMatrix(scale * rng.standard_normal((n, n, 4)))


def random_unit_vector(n, rng):
    u = rng.standard_normal((n, 4))
    return u / np.linalg.norm(u)


# JSON file format: {"n": int, "entries": [[[w, x, y, z], ...], ...]}

def matrix_to_dict(A):
    return {"n": A.n, "entries": A.entries.tolist()}


def matrix_from_dict(d):
    try:
        n = int(d["n"])
        entries = np.array(d["entries"], dtype=float)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed matrix document: {exc}") from exc
    if entries.shape != (n, n, 4):
        raise ValueError(f"entries shape {entries.shape} does not match n={n}")
    return QMatrix(entries)


def vector_to_dict(u):
    u = np.asarray(u, dtype=float)
    return {"n": u.shape[0], "entries": u.tolist()}


def vector_from_dict(d):
    n = int(d["n"])
    u = np.array(d["entries"], dtype=float)
    if u.shape != (n, 4):
        raise ValueError(f"vector shape {u.shape} does not match n={n}")
    return u


def dumps_matrix(A):
    return json.dumps(matrix_to_dict(A))


def loads_matrix(s):
    return matrix_from_dict(json.loads(s))


def load_matrix(path):
    with open(path) as fh:
        return matrix_from_dict(json.load(fh))


def save_matrix(A, path):
    with open(path, "w") as fh:
        json.dump(matrix_to_dict(A), fh)
        fh.write("\n")
