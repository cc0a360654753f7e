"""Operator generators used by the CLI and the test suite."""
from __future__ import annotations

import numpy as np

from .qmat import QMatrix, adjoint, matrix_to_dict, random_unitary

KINDS = ("diag-complex", "normal-conjugated", "jordan", "shift", "random-quaternion")


def _rngs(seed, k):
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(k)]


def random_complex_diag(n, rng):
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


def shift(n):
    """Backward shift truncated to n dimensions: T e_1 = 0, T e_k = e_{k-1}."""
    return QMatrix.from_complex(np.diag(np.ones(n - 1), 1) if n > 1 else np.zeros((1, 1)))


def jordan(n, eigenvalue=0.0):
    return QMatrix.from_complex(eigenvalue * np.eye(n) + np.diag(np.ones(n - 1), 1))


def normal_conjugated(d, seed=0):
    """``U diag(d) U*`` with a seeded random quaternionic unitary ``U``."""
    d = np.asarray(d, dtype=complex)
    U = random_unitary(len(d), seed)
    return U @ QMatrix.diag(d) @ adjoint(U), U


def make(kind, n, seed=0, d=None):
    """Build a gallery operator; returns ``(T, extra)`` where ``extra`` holds
    golden data to embed in the matrix file (or None)."""
    if kind not in KINDS:
        raise ValueError(f"unknown gallery kind {kind!r}; choose from {', '.join(KINDS)}")
    if d is not None:
        d = np.asarray(d, dtype=complex)
        n = len(d)
    if n < 1:
        raise ValueError("n must be at least 1")
    r_d, r_u, r_m = _rngs(seed, 3)
    if kind == "diag-complex":
        return QMatrix.diag(random_complex_diag(n, r_d) if d is None else d), None
    if kind == "normal-conjugated":
        d = random_complex_diag(n, r_d) if d is None else d
        T, _ = normal_conjugated(d, int(r_u.integers(2**63)))
        up = d.real + 1j * np.abs(d.imag)
        up = up[np.lexsort((up.imag, up.real))]
        return T, {"eigen": {"d": [[float(z.real), float(z.imag)] for z in up]}}
    if kind == "jordan":
        return jordan(n, 0.0 if d is None else d[0]), None
    if kind == "shift":
        return shift(n), None
    return QMatrix(r_m.standard_normal((n, n, 4))), None


def gallery_document(kind, n, seed=0, d=None):
    T, extra = make(kind, n, seed, d)
    doc = matrix_to_dict(T)
    doc["kind"] = kind
    doc["seed"] = seed
    if extra:
        doc.update(extra)
    return doc
