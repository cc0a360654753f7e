import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qbild.quaternion import (
    I,
    J,
    K,
    ONE,
    Quaternion,
    SimilarityClass,
    class_rep,
    conj,
    embed_class,
    inv,
    mul,
    norm,
    qmul_array,
    similar,
)

finite = st.floats(min_value=-10, max_value=10, allow_nan=False)
quats = st.builds(Quaternion, finite, finite, finite, finite)


def close(a, b, tol=1e-12):
    return np.max(np.abs(a.to_array() - b.to_array())) <= tol


def test_basis_products():
    assert mul(I, J) == K
    assert mul(J, K) == I
    assert mul(K, I) == J
    assert mul(J, I) == -K
    for u in (I, J, K):
        assert mul(u, u) == -ONE
    assert mul(mul(I, J), K) == -ONE


def test_identity_and_expansion():
    q = Quaternion(1.5, -2.0, 0.25, 3.0)
    assert q * 1 == q
    assert (ONE + I) * (ONE + J) == Quaternion(1, 1, 1, 1)


def test_conj_norm_inv():
    q = Quaternion(1, 1, 1, 1)
    assert conj(q) == Quaternion(1, -1, -1, -1)
    assert norm(q) == 2.0
    assert inv(J) == -J
    with pytest.raises(ZeroDivisionError):
        inv(Quaternion())


def test_similar_and_class_rep():
    assert similar(I, J)
    q = Quaternion(1, 0, 2, -2)
    assert similar(q, q)
    assert similar(q, Quaternion(1, 2 * math.sqrt(2)))
    assert not similar(q, Quaternion(1, 2))
    assert class_rep(J) == SimilarityClass(0.0, 1.0)
    assert class_rep(Quaternion(3)) == SimilarityClass(3.0, 0.0)
    c = class_rep(q)
    assert c.re == 1.0 and math.isclose(c.im_norm, 2 * math.sqrt(2))
    with pytest.raises(ValueError):
        similar(I, J, tol=-1)


def test_embed_class():
    assert embed_class(SimilarityClass(0, 1), K) == K
    c = SimilarityClass(1, 2 * math.sqrt(2))
    assert close(embed_class(c, J), Quaternion(1, 0, 2 * math.sqrt(2), 0))
    with pytest.raises(ValueError):
        embed_class(c, Quaternion(0, 2, 0, 0))
    with pytest.raises(ValueError):
        embed_class(c, Quaternion(1, 0, 0, 0))


def test_similarity_class_rejects_negative():
    with pytest.raises(ValueError):
        SimilarityClass(0.0, -1.0)


@settings(max_examples=200)
@given(quats, quats, quats)
def test_associative_distributive(a, b, c):
    scale = (1 + norm(a)) * (1 + norm(b)) * (1 + norm(c))
    assert close(mul(mul(a, b), c), mul(a, mul(b, c)), 1e-14 * scale)
    assert close(mul(a, b + c), mul(a, b) + mul(a, c), 1e-14 * scale)


@settings(max_examples=200)
@given(quats, quats)
def test_conj_reverses_products_and_norm_multiplies(a, b):
    scale = (1 + norm(a)) * (1 + norm(b))
    assert close(conj(mul(a, b)), mul(conj(b), conj(a)), 1e-14 * scale)
    assert math.isclose(norm(mul(a, b)), norm(a) * norm(b), rel_tol=1e-13, abs_tol=1e-13)
    qq = mul(a, conj(a))
    assert abs(qq.x) + abs(qq.y) + abs(qq.z) <= 1e-13 * (1 + norm(a)) ** 2
    assert math.isclose(qq.w, norm(a) ** 2, rel_tol=1e-13, abs_tol=1e-13)


@settings(max_examples=200)
@given(quats, quats.filter(lambda s: norm(s) > 1e-3))
def test_class_invariant_under_unit_conjugation(q, s):
    s = s / norm(s)
    r = mul(mul(conj(s), q), s)
    a, b = class_rep(q), class_rep(r)
    assert abs(a.re - b.re) <= 1e-12 * (1 + norm(q))
    assert abs(a.im_norm - b.im_norm) <= 1e-12 * (1 + norm(q))


def test_embed_round_trip(rng):
    for _ in range(100):
        c = SimilarityClass(rng.normal(), abs(rng.normal()))
        u = rng.normal(size=3)
        u = Quaternion(0, *(u / np.linalg.norm(u)))
        back = class_rep(embed_class(c, u))
        assert abs(back.re - c.re) <= 1e-12 and abs(back.im_norm - c.im_norm) <= 1e-12


def test_vectorized_product_matches_scalar(rng):
    a = rng.normal(size=(50, 4))
    b = rng.normal(size=(50, 4))
    ab = qmul_array(a, b)
    for k in range(50):
        assert np.allclose(ab[k], mul(Quaternion(*a[k]), Quaternion(*b[k])).to_array(), atol=1e-14)


def test_serialization_order():
    assert Quaternion(1, 2, 3, 4).to_list() == [1, 2, 3, 4]
    assert Quaternion.from_array([1, 2, 3, 4]) == Quaternion(1, 2, 3, 4)
