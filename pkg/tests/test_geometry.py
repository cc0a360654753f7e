import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from qbild.geometry import (
    HullPolygon,
    affine_image,
    clip_upper,
    contains,
    convex_hull,
    distance_to_hull,
    hausdorff,
    hull_hausdorff,
    reflect_conj,
)

coords = st.floats(-10, 10, allow_nan=False, width=64)
point_sets = arrays(np.float64, st.tuples(st.integers(1, 40), st.just(2)), elements=coords)


def brute_distance(v, p):
    """Distance to a ccw convex polygon: zero if on the inner side of every edge."""
    m = len(v)
    if m == 1:
        return float(np.linalg.norm(p - v[0]))
    best = np.inf
    inside = m >= 3
    for k in range(m if m > 2 else 1):
        a, b = v[k], v[(k + 1) % m]
        ab = b - a
        t = np.clip((p - a) @ ab / (ab @ ab), 0, 1)
        best = min(best, float(np.linalg.norm(p - a - t * ab)))
        if ab[0] * (p[1] - a[1]) - ab[1] * (p[0] - a[0]) < 0:
            inside = False
    return 0.0 if inside else best


def test_hull_examples():
    assert len(convex_hull([[0.0, 0.0]])) == 1
    h = convex_hull(np.array([[0, 0], [1, 0], [0, 1], [0.1, 0.1]], dtype=float))
    assert h.vertices.tolist() == [[0, 0], [1, 0], [0, 1]]
    seg = convex_hull(np.array([0, 0.5, 1, 0.25]))
    assert seg.vertices.tolist() == [[0, 0], [1, 0]]
    with pytest.raises(ValueError):
        convex_hull(np.zeros((0, 2)))


def test_contains_examples():
    h = convex_hull(np.array([[0, 0], [1, 0], [0, 1]], dtype=float))
    assert contains(h, (1 / 3 + 1j / 3))
    assert contains(h, (1.0, 0.0), slack=0.0)
    assert not contains(h, -2e-6 + 0.5j, slack=1e-6)
    seg = convex_hull(np.array([1j, 1]))
    assert contains(seg, 0.5 + 0.5j, 1e-12)
    assert not contains(seg, 0.4 + 0.4j, 1e-3)


def test_hausdorff_examples():
    S = np.array([0, 1, 2j])
    assert hausdorff(S, S) == 0.0
    assert hausdorff([0j], [3 + 0j]) == 3.0
    assert np.isclose(hausdorff(S, S + (0.3 - 0.4j)), 0.5)
    with pytest.raises(ValueError):
        hausdorff([], [1j])


def test_reflect_examples():
    seg = convex_hull(np.array([1j, 1]))
    assert np.allclose(sorted(reflect_conj(seg).complex_vertices, key=lambda z: z.real), [-1j, 1])
    real = convex_hull(np.array([-1.0 + 0j, 2.0 + 0j]))
    assert hull_hausdorff(reflect_conj(real), real) == 0.0


@settings(max_examples=60, deadline=None)
@given(point_sets)
def test_hull_properties(p):
    h = convex_hull(p)
    assert np.max(distance_to_hull(h, p)) <= 1e-12 * max(1, np.max(np.abs(p)))
    h2 = convex_hull(h.vertices)
    assert np.array_equal(h2.vertices, h.vertices)
    v = h.vertices
    assert tuple(v[0]) == min(map(tuple, v))
    if len(v) >= 3:
        area = 0.5 * np.sum(v[:, 0] * np.roll(v[:, 1], -1) - np.roll(v[:, 0], -1) * v[:, 1])
        assert area > 0
    assert np.array_equal(reflect_conj(reflect_conj(h)).vertices, h.vertices)


@settings(max_examples=40, deadline=None)
@given(point_sets, arrays(np.float64, (30, 2), elements=st.floats(-15, 15, allow_nan=False)))
def test_distance_matches_brute_force(p, q):
    h = convex_hull(p)
    d = distance_to_hull(h, q)
    ref = np.array([brute_distance(h.vertices, x) for x in q])
    assert np.allclose(d, ref, atol=1e-9)


@settings(max_examples=40, deadline=None)
@given(point_sets, point_sets, point_sets)
def test_hausdorff_triangle(a, b, c):
    assert hausdorff(a, c) <= hausdorff(a, b) + hausdorff(b, c) + 1e-12
    assert hausdorff(a, b) == hausdorff(b, a)


def test_hull_hausdorff_matches_dense_sampling(rng):
    a = convex_hull(rng.normal(size=(12, 2)))
    b = convex_hull(rng.normal(size=(12, 2)) + 0.3)

    def boundary(h, k=400):
        v = h.vertices
        t = np.linspace(0, 1, k, endpoint=False)[:, None]
        return np.concatenate([v[i] + t * (v[(i + 1) % len(v)] - v[i]) for i in range(len(v))])

    # dense boundaries give only a lower bound on the filled-set distance when one hull
    # pokes out of the other, so compare against the directed point-to-hull distances
    ref = max(np.max(distance_to_hull(b, boundary(a))), np.max(distance_to_hull(a, boundary(b))))
    assert abs(hull_hausdorff(a, b) - ref) <= 1e-12


def test_clip_upper_and_affine():
    h = convex_hull(np.array([-1 - 1j, 1 - 1j, 1j]))
    up = clip_upper(h)
    assert np.allclose(up.complex_vertices, [-0.5, 0.5, 1j])
    assert clip_upper(convex_hull(np.array([-1j, 1 - 2j]))) is None
    img = affine_image(h, 2.0, 3.0)
    assert hull_hausdorff(img, convex_hull(2 * h.complex_vertices + 3)) == 0.0


def test_json_roundtrip():
    h = convex_hull(np.array([0, 1, 1j, 0.2 + 0.2j]))
    back = HullPolygon.from_dict(json.loads(h.dumps()))
    assert np.array_equal(back.vertices, h.vertices)
    with pytest.raises(ValueError):
        HullPolygon.from_dict({"vertices": []})
