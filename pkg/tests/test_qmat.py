import json

import numpy as np
import pytest

from qbild.qmat import (
    QMatrix,
    adjoint,
    apply,
    chi,
    dumps_matrix,
    in_basis,
    inner,
    is_complex_operator,
    is_normal,
    is_unitary,
    loads_matrix,
    op_norm,
    random_matrix,
    random_unitary,
    right_scale,
    split,
    stack,
    unstack,
    vector_norm,
)
from qbild.quaternion import I, J, K, ONE, Quaternion, mul

from .conftest import qapply_direct, qmatmul_direct


def q1(q):
    return QMatrix([[q.to_array()]])


def test_apply_examples(rng):
    u = rng.normal(size=(3, 4))
    assert np.allclose(apply(QMatrix.identity(3), u), u)
    out = apply(q1(J), I.to_array()[None])
    assert np.allclose(out[0], (-K).to_array())


def test_apply_matches_direct_and_is_right_linear(rng):
    for n in range(1, 7):
        A = random_matrix(n, seed=n)
        u = rng.normal(size=(n, 4))
        q = Quaternion(*rng.normal(size=4))
        assert np.allclose(apply(A, u), qapply_direct(A.entries, u), atol=1e-13)
        lhs = apply(A, right_scale(u, q))
        rhs = right_scale(apply(A, u), q)
        assert np.allclose(lhs, rhs, atol=1e-12)


def test_apply_dimension_mismatch():
    with pytest.raises(ValueError):
        apply(QMatrix.identity(2), np.zeros((3, 4)))


def test_inner_axioms(rng):
    e1 = np.zeros((2, 4))
    e1[0, 0] = 1
    assert inner(e1, e1) == ONE
    for _ in range(50):
        x, y, w = rng.normal(size=(3, 4, 4))
        a, b = Quaternion(*rng.normal(size=4)), Quaternion(*rng.normal(size=4))
        lhs = inner(right_scale(x, a) + right_scale(y, b), w)
        rhs = mul(inner(x, w), a) + mul(inner(y, w), b)
        assert np.allclose(lhs.to_array(), rhs.to_array(), atol=1e-12)
        xy, yx = inner(x, y), inner(y, x)
        assert np.allclose(xy.to_array(), (yx.w, -yx.x, -yx.y, -yx.z), atol=1e-12)
        xx = inner(x, x)
        assert xx.w > 0 and abs(xx.x) + abs(xx.y) + abs(xx.z) < 1e-12
        assert np.isclose(xx.w, vector_norm(x) ** 2)
    with pytest.raises(ValueError):
        inner(np.zeros((2, 4)), np.zeros((3, 4)))


def test_split_examples():
    s = split(q1(J))
    assert s.X[0, 0] == 0 and s.Y[0, 0] == 1
    s = split(q1(Quaternion(1, 1)))
    assert s.X[0, 0] == 1 + 1j and s.Y[0, 0] == 0
    # (2 - 2i) j = 2j - 2k
    s = split(q1(Quaternion(0, 0, 2, -2)))
    assert s.X[0, 0] == 0 and s.Y[0, 0] == 2 - 2j


def test_split_reassembles(rng):
    A = random_matrix(4, seed=1)
    s = split(A)
    jmat = np.zeros((4, 4, 4))
    jmat[..., 2] = 1.0
    X = np.stack([s.X.real, s.X.imag, 0 * s.X.real, 0 * s.X.real], axis=-1)
    Y = np.stack([s.Y.real, s.Y.imag, 0 * s.Y.real, 0 * s.Y.real], axis=-1)
    from qbild.quaternion import qmul_array

    assert np.array_equal(X + qmul_array(Y, jmat), A.entries)


def test_chi_examples():
    assert np.array_equal(chi(q1(J)), np.array([[0, -1], [1, 0]]))
    assert np.array_equal(chi(QMatrix.identity(2)), np.eye(4))
    ev = np.linalg.eigvals(chi(q1(J)))
    ev = ev[np.argsort(ev.imag)]
    assert np.allclose(ev, [-1j, 1j])


def test_chi_homomorphism_and_isometry(rng):
    for n in range(1, 9):
        A, B = random_matrix(n, seed=10 + n), random_matrix(n, seed=20 + n)
        AB = QMatrix(qmatmul_direct(A.entries, B.entries))
        scale = (1 + op_norm(A)) * (1 + op_norm(B))
        assert np.max(np.abs(chi(AB) - chi(A) @ chi(B))) <= 1e-12 * scale
        assert np.max(np.abs(chi(adjoint(A)) - chi(A).conj().T)) == 0.0
        u = rng.normal(size=(n, 4))
        assert abs(vector_norm(qapply_direct(A.entries, u)) - np.linalg.norm(chi(A) @ stack(u))) <= 1e-12 * scale
        assert np.array_equal(unstack(stack(u)), u)


def test_adjoint_and_predicates(rng):
    assert adjoint(q1(J)) == q1(-J)
    A = random_matrix(3, seed=2)
    assert adjoint(adjoint(A)) == A
    for _ in range(10):
        u, v = rng.normal(size=(2, 3, 4))
        lhs = inner(apply(A, u), v)
        rhs = inner(u, apply(adjoint(A), v))
        assert np.allclose(lhs.to_array(), rhs.to_array(), atol=1e-12)
    assert is_normal(QMatrix.diag([1j, 1 + 2j]))
    assert not is_normal(QMatrix.from_complex([[0, 1], [0, 0]]))
    jm = np.zeros((2, 2, 4))
    jm[0, 1, 2] = 1.0
    assert not is_complex_operator(QMatrix(jm))
    assert is_complex_operator(QMatrix.from_complex([[1, 2j], [3, 4]]))


def test_in_basis_helper():
    D = QMatrix.diag([1 + 1j, 3 + 1j])
    U = random_unitary(2, seed=3)
    T = U @ D @ adjoint(U)
    assert not is_complex_operator(T)
    back = in_basis(T, U)
    assert is_complex_operator(back, 1e-12)
    assert np.allclose(back.entries, D.entries, atol=1e-12)


def test_op_norm(rng):
    assert np.isclose(op_norm(QMatrix.identity(3)), 1.0)
    assert np.isclose(op_norm(q1(J)), 1.0)
    A = random_matrix(4, seed=4)
    nrm = op_norm(A)
    for _ in range(200):
        u = rng.normal(size=(4, 4))
        u /= np.linalg.norm(u)
        assert vector_norm(apply(A, u)) <= nrm * (1 + 1e-12)


def test_random_unitary():
    for n in range(1, 7):
        U = random_unitary(n, seed=n)
        assert np.max(np.abs(chi(adjoint(U) @ U) - np.eye(2 * n))) <= 1e-10
        assert abs(op_norm(U) - 1) <= 1e-10
        assert is_unitary(U)
    assert random_unitary(3, seed=7) == random_unitary(3, seed=7)
    with pytest.raises(ValueError):
        random_unitary(0)


def test_json_round_trip_is_exact():
    A = random_matrix(3, seed=5)
    assert loads_matrix(dumps_matrix(A)) == A
    doc = json.loads(dumps_matrix(A))
    assert doc["n"] == 3 and len(doc["entries"][0][0]) == 4
    with pytest.raises(ValueError):
        loads_matrix(json.dumps({"n": 2, "entries": [[[1, 0, 0, 0]]]}))
    with pytest.raises(ValueError):
        loads_matrix(json.dumps({"entries": []}))
