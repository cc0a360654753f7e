"""S-spectrum of quaternionic matrices.

In finite dimension the S-spectrum coincides with the right eigenvalues.
They are read off the complex adjoint matrix: its eigenvalues come in
conjugate pairs and each pair is one similarity class.  An eigenvector
``v`` of ``chi(T)`` for ``lam`` unstacks to ``u`` with ``T u = u lam``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .qmat import QMatrix, chi, op_norm, unstack
from .quaternion import Quaternion, SimilarityClass

DEDUP_TOL = 1e-7
NEG_IMAG_CLAMP = 1e-9
PAIRING_TOL = 1e-9


@dataclass
class SpectrumResult:
    classes: list
    witnesses: list = field(default_factory=list)

    def points(self):
        """Canonical representatives as a complex array."""
        return np.array([c.complex for c in self.classes], dtype=complex)

    def to_json_list(self):
        return [
            {"re": c.re, "im": c.im_norm, "witness": np.asarray(w).tolist()}
            for c, w in zip(self.classes, self.witnesses)
        ]

    def dumps(self):
        return json.dumps(self.to_json_list())


def delta(T, q):
    """``T^2 - 2 Re(q) T + |q|^2 I``."""
    if isinstance(q, SimilarityClass):
        re, mod2 = q.re, q.re**2 + q.im_norm**2
    else:
        q = q if isinstance(q, Quaternion) else Quaternion.from_complex(q)
        re, mod2 = q.w, q.w**2 + q.x**2 + q.y**2 + q.z**2
    M = chi(T)
    return QMatrix.from_chi(M @ M - 2.0 * re * M + mod2 * np.eye(2 * T.n))


def delta_factor_check(T, q, x):
    """Residual of ``delta(T,q) x = T(Tx - xq) - (Tx - xq) q*``."""
    from .qmat import apply, right_scale
    from .quaternion import conj

    x = np.asarray(x, dtype=float)
    r = apply(T, x) - right_scale(x, q)
    rhs = apply(T, r) - right_scale(r, conj(q))
    return float(np.linalg.norm(apply(delta(T, q), x) - rhs))


def chi_eigen(T):
    """Eigenvalues and eigenvectors of the complex adjoint matrix."""
    return np.linalg.eig(chi(T))


def check_conjugate_pairing(evals, tol=PAIRING_TOL, scale=1.0):
    """True when the eigenvalue multiset is closed under conjugation."""
    evals = np.asarray(evals)
    remaining = list(np.conj(evals))
    for lam in evals:
        d = np.abs(np.array(remaining) - lam)
        k = int(np.argmin(d))
        if d[k] > tol * (1.0 + scale):
            return False
        remaining.pop(k)
    return True


def _upper(evals):
    im = evals.imag.copy()
    im[(im < 0) & (im > -NEG_IMAG_CLAMP)] = 0.0
    return evals.real + 1j * im


def upper_eigenvalues(T):
    """The n eigenvalues of ``chi(T)`` representing classes, with multiplicity.

    Each conjugate pair contributes its member in the closed upper
    half-plane; real eigenvalues, which occur twice, contribute once.
    Returns ``(values, vectors)`` with the matching chi eigenvectors as columns.
    """
    evals, evecs = chi_eigen(T)
    up = _upper(evals)
    # greedily pair each eigenvalue with its nearest unused conjugate,
    # most non-real first so real eigenvalues pair among themselves
    used = np.zeros(len(evals), dtype=bool)
    picked = []
    for a in np.argsort(-np.abs(up.imag), kind="stable"):
        if used[a]:
            continue
        used[a] = True
        free = np.flatnonzero(~used)
        b = free[np.argmin(np.abs(evals[free] - np.conj(evals[a])))]
        used[b] = True
        picked.append(a if up[a].imag >= up[b].imag else b)
    vals = up[picked]
    vals = vals.real + 1j * np.abs(vals.imag)
    order = np.lexsort((vals.imag, vals.real))
    return vals[order], evecs[:, np.array(picked)[order]]


def _witness(vec):
    u = unstack(vec)
    return u / np.linalg.norm(u)


def s_spectrum(T, tol=DEDUP_TOL):
    vals, vecs = upper_eigenvalues(T)
    thr = tol * (1.0 + op_norm(T))
    classes, witnesses = [], []
    for k in np.lexsort((vals.imag, vals.real)):
        lam = vals[k]
        if any(abs(lam.real - c.re) <= thr and abs(lam.imag - c.im_norm) <= thr for c in classes):
            continue
        classes.append(SimilarityClass(float(lam.real), float(lam.imag)))
        witnesses.append(_witness(vecs[:, k]))
    return SpectrumResult(classes, witnesses)


def delta_min_sv(T, c):
    D = delta(T, c)
    return float(np.linalg.svd(chi(D), compute_uv=False)[-1])


def s_radius(T):
    return max(c.modulus for c in s_spectrum(T).classes)


def _as_points(s):
    if isinstance(s, SpectrumResult):
        s = s.points()
    pts = np.asarray(s, dtype=complex).ravel()
    if pts.size == 0:
        raise ValueError("empty spectrum")
    return pts


def directed_distance(a, b):
    """``sup_{p in a} inf_{q in b} |p - q|`` over canonical representatives."""
    pa, pb = _as_points(a), _as_points(b)
    return float(np.max(np.min(np.abs(pa[:, None] - pb[None, :]), axis=1)))


def spectrum_distance(a, b):
    return max(directed_distance(a, b), directed_distance(b, a))
