"""Planar convex geometry on points of the complex plane.

Points may be given as complex arrays or as (m, 2) real arrays.  Hulls are
stored counterclockwise starting from the lexicographically smallest vertex
and may degenerate to a segment (2 vertices) or a point (1 vertex).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

COLLINEAR_TOL = 1e-12
_CHUNK = 4096


def as_xy(points):
    p = np.asarray(points)
    if np.iscomplexobj(p) or p.ndim == 1:
        p = np.asarray(p, dtype=complex).ravel()
        return np.column_stack([p.real, p.imag])
    p = np.asarray(p, dtype=float)
    if p.ndim != 2 or p.shape[1] != 2:
        raise ValueError(f"expected (m, 2) points, got shape {p.shape}")
    return p


@dataclass(frozen=True)
class HullPolygon:
    vertices: np.ndarray

    @property
    def complex_vertices(self):
        return self.vertices[:, 0] + 1j * self.vertices[:, 1]

    def __len__(self):
        return len(self.vertices)

    def to_dict(self):
        return {"vertices": self.vertices.tolist()}

    @classmethod
    def from_dict(cls, d):
        v = np.array(d["vertices"], dtype=float).reshape(-1, 2)
        if len(v) == 0:
            raise ValueError("hull has no vertices")
        return convex_hull(v)

    def dumps(self):
        return json.dumps(self.to_dict())


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points, tol=COLLINEAR_TOL):
    """Monotone-chain hull.

    The chain uses the exact turn sign; afterwards any vertex lying within
    ``tol * scale`` of the chord through its neighbours is dropped.
    """
    p = as_xy(points)
    if len(p) == 0:
        raise ValueError("convex hull of an empty point set")
    p = np.unique(p, axis=0)  # sorted lexicographically
    if len(p) == 1:
        return HullPolygon(p)

    def chain(pts):
        out = []
        for q in pts:
            while len(out) >= 2 and _cross(out[-2], out[-1], q) <= 0:
                out.pop()
            out.append(q)
        return out

    lower = chain(p)
    upper = chain(p[::-1])
    verts = _prune(lower[:-1] + upper[:-1], tol * max(1.0, float(np.max(np.abs(p)))))
    start = min(range(len(verts)), key=lambda k: tuple(verts[k]))
    return HullPolygon(np.array(verts[start:] + verts[:start]))


def _prune(verts, eps):
    """Drop near-collinear vertices of a ccw polygon until none remain.

    Each round removes the first vertex of every run of qualifying vertices,
    so no two removals share a neighbour.
    """
    v = np.array(verts)
    while len(v) > 2:
        a, b = np.roll(v, 1, axis=0), np.roll(v, -1, axis=0)
        ab = b - a
        L = np.hypot(ab[:, 0], ab[:, 1])
        cr = ab[:, 0] * (v[:, 1] - a[:, 1]) - ab[:, 1] * (v[:, 0] - a[:, 0])
        t = np.einsum("ij,ij->i", v - a, ab)
        q = (L > 0) & (np.abs(cr) <= eps * L) & (t >= 0) & (t <= L * L)
        if not q.any():
            break
        drop = q & ~np.roll(q, 1)
        if not drop.any():
            drop = np.zeros(len(v), bool)
            drop[0] = True
        v = v[~drop]
    if len(v) == 2 and math.hypot(*(v[0] - v[1])) <= eps:
        v = v[:1]
    return list(v)


def _segment_distance(p, a, b):
    """Distances from points p (m, 2) to segment [a, b]."""
    ab = b - a
    L2 = float(ab @ ab)
    if L2 == 0.0:
        return np.linalg.norm(p - a, axis=1)
    t = np.clip(((p - a) @ ab) / L2, 0.0, 1.0)
    return np.linalg.norm(p - (a + t[:, None] * ab), axis=1)


def _segment_distance_rows(p, a, b):
    """Row-wise distance from p[i] to segment [a[i], b[i]]."""
    ab = b - a
    L2 = np.einsum("ij,ij->i", ab, ab)
    with np.errstate(invalid="ignore", divide="ignore"):
        t = np.where(L2 > 0, np.einsum("ij,ij->i", p - a, ab) / L2, 0.0)
    t = np.clip(t, 0.0, 1.0)
    return np.linalg.norm(p - (a + t[:, None] * ab), axis=1)


def distance_to_hull(h, points):
    """Euclidean distance from each point to the filled hull (0 inside)."""
    p = as_xy(points)
    v = h.vertices
    m = len(v)
    if m == 1:
        return np.linalg.norm(p - v[0], axis=1)
    if m == 2:
        return _segment_distance(p, v[0], v[1])
    # wedge lookup around an interior point: vertex angles increase ccw
    c = v.mean(axis=0)
    ang = np.arctan2(v[:, 1] - c[1], v[:, 0] - c[0])
    start = int(np.argmin(ang))
    v = np.roll(v, -start, axis=0)
    ang = np.roll(ang, -start)
    pa = np.arctan2(p[:, 1] - c[1], p[:, 0] - c[0])
    k = (np.searchsorted(ang, pa, side="right") - 1) % m
    a, b = v[k], v[(k + 1) % m]
    cr = (b[:, 0] - a[:, 0]) * (p[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (p[:, 0] - a[:, 0])
    scale = max(1.0, float(np.max(np.abs(v))))
    out = np.zeros(len(p))
    L = np.hypot(b[:, 0] - a[:, 0], b[:, 1] - a[:, 1])
    idx = np.flatnonzero(cr < -COLLINEAR_TOL * scale * L)
    if idx.size == 0:
        return out
    # the nearest point lies on the chain of edges visible from p, which is
    # contiguous and contains the wedge edge; walk it in both directions
    q, k0 = p[idx], k[idx]
    best = _segment_distance_rows(q, v[k0], v[(k0 + 1) % m])
    for step in (1, -1):
        act = np.arange(idx.size)
        for o in range(1, m):
            e = (k0[act] + step * o) % m
            a, b = v[e], v[(e + 1) % m]
            qa = q[act]
            vis = (b[:, 0] - a[:, 0]) * (qa[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (qa[:, 0] - a[:, 0]) < 0
            if not vis.any():
                break
            act = act[vis]
            best[act] = np.minimum(best[act], _segment_distance_rows(q[act], a[vis], b[vis]))
    out[idx] = best
    return out


def contains(h, points, slack=0.0):
    """Membership of one point (complex number or ``(x, y)`` pair) with slack."""
    if np.ndim(points) == 0:
        p = np.array([complex(points)])
    else:
        p = np.asarray(points, dtype=float).reshape(1, 2)
    return bool(distance_to_hull(h, p)[0] <= slack)


def hausdorff(a, b):
    """Symmetric Hausdorff distance between finite point sets."""
    pa, pb = as_xy(a), as_xy(b)
    if len(pa) == 0 or len(pb) == 0:
        raise ValueError("Hausdorff distance of an empty set")
    d2 = np.full(len(pa), np.inf)
    d1 = 0.0
    for s in range(0, len(pb), _CHUNK):
        D = np.linalg.norm(pa[:, None, :] - pb[None, s:s + _CHUNK, :], axis=2)
        d1 = max(d1, float(np.max(np.min(D, axis=0))))
        d2 = np.minimum(d2, np.min(D, axis=1))
    return max(d1, float(np.max(d2)))


def hull_hausdorff(a, b):
    """Hausdorff distance between two filled convex hulls.

    Distance to a convex set is convex, so the supremum is attained at a vertex.
    """
    return max(float(np.max(distance_to_hull(b, a.vertices))),
               float(np.max(distance_to_hull(a, b.vertices))))


def reflect_conj(h):
    v = h.vertices * np.array([1.0, -1.0])
    return convex_hull(v)


def clip_upper(h, tol=0.0):
    """Part of the filled hull in the closed upper half-plane, or None if empty."""
    v = h.vertices
    keep = [p for p in v if p[1] >= -tol]
    m = len(v)
    if m > 1:
        edges = [(v[k], v[(k + 1) % m]) for k in range(m if m > 2 else 1)]
        for a, b in edges:
            if (a[1] > 0 and b[1] < 0) or (a[1] < 0 and b[1] > 0):
                t = a[1] / (a[1] - b[1])
                keep.append(np.array([a[0] + t * (b[0] - a[0]), 0.0]))
    if not keep:
        return None
    pts = np.array(keep)
    pts[:, 1] = np.maximum(pts[:, 1], 0.0)
    return convex_hull(pts)


def affine_image(h, a, b):
    """Hull of ``a*z + b`` for real ``a`` and real or complex ``b``."""
    z = h.complex_vertices * a + b
    return convex_hull(z)
