"""Quaternionic numerical range: point evaluation, bild clouds, radius and
real-slice estimates.

All evaluation goes through the stacked complex vector ``v = (x, conj(y))``
of ``u = x + y j``.  With ``M = chi(T)`` the numerical range point
``<Tu, u> = c1 + c2 j`` has

    c1       = v^H M v
    conj(c2) = v^T P M v,    P = [[0, I], [-I, 0]]

and its canonical upper half-plane representative is
``Re c1 + i sqrt(Im(c1)^2 + |c2|^2)``.
"""
from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .qmat import chi, from_pair, op_norm, stack, unstack
from .quaternion import Quaternion

UNIT_TOL = 1e-10
CHUNK = 4096


def _sphere_stream(n, count, seed, threads=1, chunk=CHUNK):
    """Unit quaternion vectors, chunk-seeded so the stream ignores ``threads``."""
    nchunks = -(-count // chunk)

    def draw(i):
        size = min(chunk, count - i * chunk)
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(i,)))
        u = rng.standard_normal((size, n, 4))
        return u / np.linalg.norm(u, axis=(1, 2))[:, None, None]

    if threads > 1 and nchunks > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(draw, range(nchunks)))
    else:
        parts = [draw(i) for i in range(nchunks)]
    return np.concatenate(parts, axis=0)


def _forms_batch(M, V):
    """``(c1, conj(c2))`` for stacked vectors in the rows of ``V``."""
    W = V @ M.T
    n = M.shape[0] // 2
    c1 = np.sum(np.conj(V) * W, axis=1)
    c2c = np.sum(V[:, :n] * W[:, n:] - V[:, n:] * W[:, :n], axis=1)
    return c1, c2c


def nr_points(T, U):
    """``<T u, u>`` for a batch of quaternion vectors, shape (m, n, 4) -> (m, 4)."""
    U = np.asarray(U, dtype=float)
    V = stack(U)
    c1, c2c = _forms_batch(chi(T), V)
    return from_pair(c1, np.conj(c2c))


def nr_point(T, u):
    u = np.asarray(u, dtype=float)
    if abs(np.linalg.norm(u) - 1.0) > UNIT_TOL:
        raise ValueError("nr_point requires a unit vector")
    return Quaternion.from_array(nr_points(T, u[None])[0])


def _reps(c1, c2c):
    return c1.real + 1j * np.sqrt(c1.imag**2 + np.abs(c2c) ** 2)


@dataclass
class BildCloud:
    points: np.ndarray
    witnesses: np.ndarray

    def __len__(self):
        return len(self.points)

    def with_conjugates(self):
        return np.concatenate([self.points, np.conj(self.points)])

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["re", "im", "witness-index"])
        for k, p in enumerate(self.points):
            w.writerow([repr(float(p.real)), repr(float(p.imag)), k])
        return buf.getvalue()

    def witnesses_json(self):
        return json.dumps({"witnesses": self.witnesses.tolist()})


def sample_cloud(T, count, seed=0, threads=1):
    if count < 1:
        raise ValueError("count must be at least 1")
    U = _sphere_stream(T.n, count, seed, threads=threads)
    c1, c2c = _forms_batch(chi(T), stack(U))
    return BildCloud(_reps(c1, c2c), U)


def numerical_radius_estimate(T, cloud):
    if len(cloud) == 0:
        raise ValueError("empty cloud")
    return float(np.max(np.abs(cloud.points)))


class _Forms:
    """Values and real Jacobians of ``c1`` and ``conj(c2)`` at a real parameter
    vector ``r = [Re v, Im v]`` of length 4n."""

    def __init__(self, T):
        self.M = chi(T)
        m = self.M.shape[0]
        n = m // 2
        P = np.zeros((m, m))
        P[:n, n:] = np.eye(n)
        P[n:, :n] = -np.eye(n)
        B = P @ self.M
        self.Bs = B + B.T
        self.B = B

    def __call__(self, r):
        m = self.M.shape[0]
        v = r[:m] + 1j * r[m:]
        w = self.M @ v
        u = self.M.T @ np.conj(v)
        c1 = np.vdot(v, w)
        J1 = np.concatenate([w + u, -1j * w + 1j * u])
        c2c = v @ self.B @ v
        p = self.Bs @ v
        J2 = np.concatenate([p, 1j * p])
        return c1, J1, c2c, J2


def _on_sphere(fun):
    """Lift an objective on the unit sphere to ``r -> fun(r/|r|)`` with projected gradient."""

    def wrapped(r):
        nr = np.linalg.norm(r)
        z = r / nr
        f, g = fun(z)
        return f, (g - (z @ g) * z) / nr

    return wrapped


def _r_from_u(u):
    v = stack(u)
    return np.concatenate([v.real, v.imag])


def _u_from_r(r):
    m = len(r) // 2
    u = unstack(r[:m] + 1j * r[m:])
    return u / np.linalg.norm(u)


def refine_numerical_radius(T, cloud, starts=8, maxiter=500):
    """Numerical radius estimate improved by local ascent of ``|<Tu,u>|``
    from the best cloud witnesses.  Always a lower bound on the radius."""
    forms = _Forms(T)

    def neg_mod2(z):
        c1, J1, c2c, J2 = forms(z)
        val = abs(c1) ** 2 + abs(c2c) ** 2
        g = 2 * np.real(np.conj(c1) * J1) + 2 * np.real(np.conj(c2c) * J2)
        return -val, -g

    best = numerical_radius_estimate(T, cloud)
    top = np.argsort(-np.abs(cloud.points))[:starts]
    obj = _on_sphere(neg_mod2)
    for k in top:
        res = minimize(obj, _r_from_u(cloud.witnesses[k]), jac=True, method="L-BFGS-B",
                       options={"maxiter": maxiter, "gtol": 1e-12, "ftol": 1e-15})
        best = max(best, float(np.sqrt(max(-res.fun, 0.0))))
    return best


def bild_formula_point(T, x, y, tol=UNIT_TOL):
    """``<Tx,x> + <T*y,y> + <(T - T*)y, x> j`` for a complex operator ``T``."""
    from .qmat import is_complex_operator, split

    if not is_complex_operator(T, tol):
        raise ValueError("T must be a complex operator in the standard basis")
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    if abs(np.vdot(x, x).real + np.vdot(y, y).real - 1.0) > tol:
        raise ValueError("(x, y) must satisfy |x|^2 + |y|^2 = 1")
    A = split(T).X
    AH = A.conj().T
    c1 = np.vdot(x, A @ x) + np.vdot(y, AH @ y)
    c2 = np.vdot(x, (A - AH) @ y)
    return Quaternion(c1.real, c1.imag, c2.real, c2.imag)


@dataclass
class RealRangeBounds:
    v_min: float = float("nan")
    v_max: float = float("nan")
    attained: list = field(default_factory=list)
    empty: bool = False


def default_im_tol(T):
    return 1e-3 * (1.0 + op_norm(T))


def cloud_real_extremes(cloud, im_tol, T=None, refine=True, starts=8):
    """Extremes of Re over cloud points within ``im_tol`` of the real axis.

    With ``T`` given, the extremes are polished by a penalized local descent.
    Starts are the qualifying extremes plus the witnesses closest to the real
    axis, since random draws seldom land on it.
    """
    pts = cloud.points
    ok = np.flatnonzero(np.abs(pts.imag) <= im_tol)
    out = RealRangeBounds(empty=True)
    if ok.size:
        order = ok[np.argsort(pts[ok].real)]
        lo_k, hi_k = order[0], order[-1]
        out = RealRangeBounds(float(pts[lo_k].real), float(pts[hi_k].real),
                              [cloud.witnesses[lo_k], cloud.witnesses[hi_k]])
    if T is None or not refine:
        return out
    near = np.argsort(np.abs(pts.imag))[: 4 * starts]
    for sign in (1.0, -1.0):
        picks = list(near[np.argsort(sign * pts[near].real)][:starts])
        if ok.size:
            picks = list(order[:: int(sign)][:starts]) + picks
        for k in picks:
            val, u = _refine_real(T, cloud.witnesses[k], sign)
            if val is None:
                continue
            if out.empty:
                out = RealRangeBounds(val, val, [u, u])
            elif sign > 0 and val < out.v_min:
                out.v_min, out.attained[0] = val, u
            elif sign < 0 and val > out.v_max:
                out.v_max, out.attained[1] = val, u
    return out


def _refine_real(T, u0, sign, mu0=1e2, growth=10.0, outer=6, accept=1e-6):
    forms = _Forms(T)
    r = _r_from_u(u0)
    for it in range(outer):
        mu = mu0 * growth**it

        def obj(z, mu=mu):
            c1, J1, c2c, J2 = forms(z)
            im2 = c1.imag**2 + abs(c2c) ** 2
            g = sign * np.real(J1) + mu * (2 * c1.imag * np.imag(J1) + 2 * np.real(np.conj(c2c) * J2))
            return sign * c1.real + mu * im2, g

        r = minimize(_on_sphere(obj), r, jac=True, method="L-BFGS-B").x
    u = _u_from_r(r)
    q = nr_points(T, u[None])[0]
    if np.linalg.norm(q[1:]) > accept * (1.0 + op_norm(T)):
        return None, None
    return float(q[0]), u


# Omega-constrained oracle for diagonal operators D = H + S i.

def _omega_parts(h, s, z):
    n = len(h)
    xr, xi, yr, yi = z[:n], z[n:2 * n], z[2 * n:3 * n], z[3 * n:]
    f = float(h @ (xr**2 + xi**2 + yr**2 + yi**2))
    gf = 2 * np.concatenate([h * xr, h * xi, h * yr, h * yi])
    p1 = float(s @ (xr**2 + xi**2 - yr**2 - yi**2))
    g1 = 2 * np.concatenate([s * xr, s * xi, -s * yr, -s * yi])
    # phi2 = sum s conj(x) y = A + iB
    A = float(s @ (xr * yr + xi * yi))
    gA = np.concatenate([s * yr, s * yi, s * xr, s * xi])
    B = float(s @ (xr * yi - xi * yr))
    gB = np.concatenate([s * yi, -s * yr, -s * xi, s * xr])
    return f, gf, p1, g1, A, gA, B, gB


def omega_residual(h, s, x, y):
    """Constraint values ``(phi1, |phi2|, phi3)`` at a complex pair."""
    h = np.asarray(h, float)
    s = np.asarray(s, float)
    x = np.asarray(x, complex)
    y = np.asarray(y, complex)
    phi1 = float(s @ (np.abs(x) ** 2 - np.abs(y) ** 2))
    phi2 = complex(np.sum(s * np.conj(x) * y))
    phi3 = float(np.sum(np.abs(x) ** 2 + np.abs(y) ** 2) - 1.0)
    return phi1, abs(phi2), phi3


def _project_omega(h, s, z, iters=20):
    """Gauss-Newton restoration onto the constraint set.

    A finite penalty leaves the minimizer slightly infeasible, which biases
    the objective outward; the reported point must be feasible.
    """
    for _ in range(iters):
        _, _, p1, g1, A, gA, B, gB = _omega_parts(h, s, z)
        c = np.array([p1, A, B])
        if np.max(np.abs(c)) <= 1e-15:
            break
        Jc = np.stack([g1, gA, gB])
        Jc = Jc - np.outer(Jc @ z, z)  # stay tangent to the sphere
        z = z - np.linalg.lstsq(Jc, c, rcond=1e-12)[0]
        z = z / np.linalg.norm(z)
    return z


def _oracle_run(h, s, sign, seed, k, mu0, growth, outer):
    n = len(h)
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(k,)))
    r = rng.standard_normal(4 * n)
    for it in range(outer):
        mu = mu0 * growth**it

        def obj(z, mu=mu):
            f, gf, p1, g1, A, gA, B, gB = _omega_parts(h, s, z)
            val = sign * f + mu * (p1 * p1 + A * A + B * B)
            g = sign * gf + mu * (2 * p1 * g1 + 2 * A * gA + 2 * B * gB)
            return val, g

        r = minimize(_on_sphere(obj), r, jac=True, method="L-BFGS-B",
                     options={"gtol": 1e-12, "ftol": 1e-15}).x
    z = _project_omega(h, s, r / np.linalg.norm(r))
    x = z[:n] + 1j * z[n:2 * n]
    y = z[2 * n:3 * n] + 1j * z[3 * n:]
    return float(h @ (np.abs(x) ** 2 + np.abs(y) ** 2)), (x, y)


def real_range_oracle(H, S, restarts=64, seed=0, mu0=1e2, growth=10.0, outer=6, workers=1):
    """Min and max of ``<Hx,x> + <Hy,y>`` over the constraint set

        <Sx,x> = <Sy,y>,   <Sy,x> = 0,   |x|^2 + |y|^2 = 1

    by multi-start quadratic-penalty descent, normalization enforced by
    projection.  ``H`` and ``S`` are the real and (nonnegative) imaginary
    parts of a complex diagonal.
    """
    h = np.real(np.diag(H) if np.ndim(H) == 2 else np.asarray(H)).astype(float)
    s = np.real(np.diag(S) if np.ndim(S) == 2 else np.asarray(S)).astype(float)
    if len(h) != len(s):
        raise ValueError("H and S must have equal length")
    if len(h) < 2:
        raise ValueError("the oracle needs dimension at least 2")
    if np.any(s < 0):
        raise ValueError("S must be nonnegative")

    def run(job):
        sign, k = job
        return _oracle_run(h, s, sign, seed, k, mu0, growth, outer)

    jobs = [(1.0, k) for k in range(restarts)] + [(-1.0, restarts + k) for k in range(restarts)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, jobs))
    else:
        results = [run(j) for j in jobs]
    lows, highs = results[:restarts], results[restarts:]
    lo = min(lows, key=lambda t: t[0])
    hi = max(highs, key=lambda t: t[0])
    return RealRangeBounds(lo[0], hi[0], [lo[1], hi[1]])
