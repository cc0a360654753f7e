"""Exact upper bild of normal and complex operators.

For a normal operator with class representatives ``d_k = h_k + s_k i`` the
closed upper bild is the convex hull of the ``d_k`` and the two real
endpoints ``v_min``, ``v_max``, which come from pairs of eigenvalues: the
segment from ``d_k`` to ``conj(d_j)`` crosses the real axis at

    h_k * s_j / (s_k + s_j) + h_j * s_k / (s_k + s_j)

and a pair of real eigenvalues contributes the whole interval between them.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .geometry import clip_upper, convex_hull
from .numrange import RealRangeBounds
from .qmat import (
    QMatrix,
    chi,
    gram_schmidt,
    inner,
    is_complex_operator,
    is_normal,
    op_norm,
    right_scale,
    split,
    unstack,
)
from .spectrum import DEDUP_TOL, upper_eigenvalues

REAL_PAIR_TOL = 1e-12
NORMAL_TOL = 1e-9


@dataclass
class NormalEigenData:
    """``d`` in the closed upper half-plane, with multiplicity; ``basis`` is a
    unitary whose columns satisfy ``T u_k = u_k d_k`` (None for bare values)."""

    d: np.ndarray
    basis: QMatrix | None = None

    def __post_init__(self):
        self.d = np.asarray(self.d, dtype=complex)
        if np.any(self.d.imag < 0):
            raise ValueError("eigenvalues must lie in the closed upper half-plane")


@dataclass(frozen=True)
class CkjValue:
    k: int
    j: int
    lo: float
    hi: float


def _cluster(vals, thr):
    groups = []
    for idx in range(len(vals)):
        for g in groups:
            if abs(vals[g[0]] - vals[idx]) <= thr:
                g.append(idx)
                break
        else:
            groups.append([idx])
    return groups


def _pivoted_basis(cands, m, existing):
    """Pick ``m`` orthonormal vectors from the right span of ``cands``,
    largest residual first, orthogonal to ``existing``."""
    res = [np.array(c) for c in cands]
    for e in existing:
        res = [r - right_scale(e, inner(r, e)) for r in res]
    out = []
    for _ in range(m):
        norms = [np.linalg.norm(r) for r in res]
        k = int(np.argmax(norms))
        if norms[k] < 1e-6:
            raise np.linalg.LinAlgError("could not build an eigenbasis for a normal operator")
        e = gram_schmidt(existing + out + [res[k]])[-1]
        out.append(e)
        res = [r - right_scale(e, inner(r, e)) for r in res]
    return out


def normalize_eigs(T, tol=NORMAL_TOL):
    if not is_normal(T, tol):
        raise ValueError("operator is not normal")
    vals, _ = upper_eigenvalues(T)
    M = chi(T)
    n = T.n
    thr = DEDUP_TOL * (1.0 + op_norm(T))
    d, cols = [], []
    for g in _cluster(vals, thr):
        mu = complex(np.mean(vals[g]))
        m = len(g)
        real = mu.imag <= thr
        if real:
            mu = complex(mu.real, 0.0)
        # the chi-eigenspace has dimension m (2m on the real axis)
        _, _, Vh = np.linalg.svd(M - mu * np.eye(2 * n))
        span = Vh.conj().T[:, -(2 * m if real else m):]
        cols.extend(_pivoted_basis([unstack(v) for v in span.T], m, cols))
        d.extend([mu] * m)
    U = QMatrix(np.stack(cols, axis=1))
    return NormalEigenData(np.array(d), U)


def ckj(dk, dj, k=0, j=1):
    dk, dj = complex(dk), complex(dj)
    if dk.imag < 0 or dj.imag < 0:
        raise ValueError("ckj expects points of the closed upper half-plane")
    hk, sk, hj, sj = dk.real, dk.imag, dj.real, dj.imag
    if sk + sj <= REAL_PAIR_TOL:
        return CkjValue(k, j, min(hk, hj), max(hk, hj))
    c = hk * (sj / (sj + sk)) + hj * (sk / (sj + sk))
    return CkjValue(k, j, c, c)


def _pair_witness(d, k, j, at_lo, n):
    """Coefficients ``w = x + y j`` (in the eigenbasis) realizing the pair value."""
    sk, sj = d[k].imag, d[j].imag
    w = np.zeros((n, 4))
    if sk + sj <= REAL_PAIR_TOL:
        pick = k if (d[k].real <= d[j].real) == at_lo else j
        w[pick, 0] = 1.0
        return w
    alpha = sj / (sk + sj)
    w[k, 0] = math.sqrt(alpha)
    w[j, 2] = math.sqrt(1.0 - alpha)  # sqrt(1 - alpha) * j
    return w


def v_bounds(e):
    if not isinstance(e, NormalEigenData):
        e = NormalEigenData(e)
    d = e.d
    n = len(d)
    if n < 2:
        raise ValueError("v_bounds needs at least two eigenvalues")
    vals = [ckj(d[k], d[j], k, j) for k, j in itertools.combinations(range(n), 2)]
    lo = min(vals, key=lambda c: c.lo)
    hi = max(vals, key=lambda c: c.hi)
    witnesses = []
    for c, at_lo in ((lo, True), (hi, False)):
        w = _pair_witness(d, c.k, c.j, at_lo, n)
        witnesses.append(e.basis @ w if e.basis is not None else w)
    return RealRangeBounds(lo.lo, hi.hi, witnesses)


def exact_upper_bild_normal(T, eig=None):
    if T.n < 2:
        raise ValueError("dimension must be at least 2")
    e = eig if eig is not None else normalize_eigs(T)
    vb = v_bounds(e)
    return convex_hull(np.concatenate([e.d, [vb.v_min, vb.v_max]]))


def vertex_witnesses(T, eig=None):
    """Hull vertices of the exact upper bild paired with unit witness vectors."""
    e = eig if eig is not None else normalize_eigs(T)
    vb = v_bounds(e)
    hull = exact_upper_bild_normal(T, e)
    cands = [(complex(dk), e.basis.entries[:, k]) for k, dk in enumerate(e.d)]
    cands += [(complex(vb.v_min), vb.attained[0]), (complex(vb.v_max), vb.attained[1])]
    out = []
    for z in hull.complex_vertices:
        p, u = min(cands, key=lambda c: abs(c[0] - z))
        out.append((z, u))
    return out


def _support_points(M, thetas):
    """Boundary points of the complex numerical range with outward normals
    ``exp(i*theta)``, from top eigenvectors of the rotated Hermitian parts."""
    rot = np.exp(-1j * np.asarray(thetas))[:, None, None]
    Hth = (rot * M + np.conj(rot) * M.conj().T) / 2
    _, V = np.linalg.eigh(Hth)
    v = V[:, :, -1]
    return np.einsum("ki,ij,kj->k", np.conj(v), M, v)


def _sag(pa, pb, ta, tb):
    """Largest possible gap between chord [pa, pb] and the boundary arc
    between them: distance from the chord to the intersection of the two
    support lines."""
    chord = pb - pa
    L = np.abs(chord)
    na, nb = np.exp(1j * ta), np.exp(1j * tb)
    det = (np.conj(na) * nb).imag
    ca, cb = (np.conj(na) * pa).real, (np.conj(nb) * pb).real
    with np.errstate(divide="ignore", invalid="ignore"):
        z = (ca * nb.imag - cb * na.imag + 1j * (cb * na.real - ca * nb.real)) / det
        gap = np.abs(((z - pa) * np.conj(chord)).imag) / L
    gap = np.where(np.abs(det) < 1e-15, L, gap)
    # base angles are nonnegative and sum to the angle step, which caps the
    # height; this also absorbs roundoff in the intersection at tiny steps
    cap = 0.5 * L * np.tan(np.minimum(np.abs(tb - ta), 3.0) / 2)
    gap = np.minimum(np.nan_to_num(gap, nan=np.inf), cap)
    return np.where(L == 0.0, 0.0, gap)


def complex_numrange_hull(M, angles=720, refine_tol=None, max_depth=40):
    """Inner polygonal approximation of the complex numerical range by a
    support-function sweep over ``angles`` equispaced directions.

    With ``refine_tol`` set, adjacent directions are bisected until every
    chord is within ``refine_tol`` of the true boundary.
    """
    if angles < 3:
        raise ValueError("need at least 3 angles")
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    th = 2 * np.pi * np.arange(angles) / angles
    pts = _support_points(M, th)
    if refine_tol is not None:
        for _ in range(max_depth):
            th_next = np.append(th[1:], th[0] + 2 * np.pi)
            pts_next = np.roll(pts, -1)
            bad = np.flatnonzero(_sag(pts, pts_next, th, th_next) > refine_tol)
            if bad.size == 0:
                break
            mid = 0.5 * (th[bad] + th_next[bad])
            th = np.concatenate([th, mid])
            pts = np.concatenate([pts, _support_points(M, mid)])
            order = np.argsort(th, kind="stable")
            th, pts = th[order], pts[order]
    return convex_hull(pts)


def upper_bild_complex(T, vb, angles=720, refine_tol=None):
    """Hull of the upper parts of W_C(T) and W_C(T*) together with the real
    range endpoints."""
    if not is_complex_operator(T):
        raise ValueError("T must be a complex operator in the standard basis")
    A = split(T).X
    pts = []
    for h in (complex_numrange_hull(A, angles, refine_tol), complex_numrange_hull(A.conj().T, angles, refine_tol)):
        up = clip_upper(h)
        if up is not None:
            pts.append(up.complex_vertices)
    if vb is not None and not vb.empty:
        pts.append(np.array([vb.v_min, vb.v_max], dtype=complex))
    return convex_hull(np.concatenate(pts))
