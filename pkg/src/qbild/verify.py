"""Structural checks on a concrete operator.

Each check returns a :class:`Check` carrying the measured residual and the
tolerance it was held to.  ``verify_operator`` runs every check applicable
to the operator and marks the rest SKIPPED.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import HullPolygon, distance_to_hull, hull_hausdorff, reflect_conj
from .normal import (
    exact_upper_bild_normal,
    normalize_eigs,
    upper_bild_complex,
    v_bounds,
    vertex_witnesses,
)
from .numrange import (
    cloud_real_extremes,
    default_im_tol,
    nr_points,
    real_range_oracle,
    refine_numerical_radius,
    sample_cloud,
)
from .qmat import apply, is_complex_operator, is_normal, op_norm, right_scale
from .quaternion import Quaternion
from .spectrum import delta_factor_check, delta_min_sv, s_spectrum

PASS, FAIL, SKIPPED = "PASS", "FAIL", "SKIPPED"

TOLERANCES = {
    "delta_factor": 1e-10,
    "inclusion": 1e-8,
    "radius_exact": 1e-9,
    "radius_sampled": 1e-6,
    "norm_ratio": 0.02,
    "hull_slack": 1e-8,
    "attainment": 1e-9,
    "oracle": 1e-3,
    "hull_agreement": 1e-6,
    "golden": 1e-8,
}

LEVELS = {"fast": {"samples": 20000, "restarts": 16}, "full": {"samples": 100000, "restarts": 64}}


@dataclass
class Check:
    name: str
    status: str
    residual: float = float("nan")
    tol: float = float("nan")
    detail: str = ""

    def line(self):
        if self.status == SKIPPED:
            return f"{self.status:7s} {self.name}: {self.detail}"
        return f"{self.status:7s} {self.name}: residual={self.residual:.3e} tol={self.tol:.3e} {self.detail}".rstrip()


def _judge(name, residual, tol, detail=""):
    return Check(name, PASS if residual <= tol else FAIL, float(residual), float(tol), detail)


def check_delta_factor(T, rng, trials=20, tol=TOLERANCES["delta_factor"]):
    scale = (1.0 + op_norm(T)) ** 2
    worst = 0.0
    for _ in range(trials):
        q = Quaternion(*rng.standard_normal(4))
        x = rng.standard_normal((T.n, 4))
        worst = max(worst, delta_factor_check(T, q, x) / (scale * np.linalg.norm(x)))
    return _judge("delta_factorization", worst, tol, "relative to (1+|T|)^2 |x|")


def check_spectral_inclusion(T, sigma=None, tol=TOLERANCES["inclusion"]):
    """Every class lies in the numerical range via its own eigenvector."""
    sigma = sigma or s_spectrum(T)
    scale = 1.0 + op_norm(T)
    W = np.array(sigma.witnesses)
    q = nr_points(T, W)
    reps = q[:, 0] + 1j * np.linalg.norm(q[:, 1:], axis=1)
    worst = float(np.max(np.abs(reps - sigma.points())))
    eig_res = max(
        float(np.linalg.norm(apply(T, x) - right_scale(x, Quaternion(c.re, c.im_norm))))
        for c, x in zip(sigma.classes, sigma.witnesses)
    )
    return _judge("spectral_inclusion", max(worst, eig_res) / scale, tol,
                  f"classes={len(sigma.classes)}")


def check_delta_singular(T, sigma=None, tol=1e-8):
    sigma = sigma or s_spectrum(T)
    scale = 1.0 + op_norm(T) ** 2
    worst = max(delta_min_sv(T, c) for c in sigma.classes)
    return _judge("delta_singular_on_spectrum", worst / scale, tol)


def radius_chain_exact(T, hull=None, sigma=None, tol=TOLERANCES["radius_exact"]):
    """``r_S <= omega <= |T| <= 2 omega`` with omega read off the exact hull."""
    hull = hull or exact_upper_bild_normal(T)
    sigma = sigma or s_spectrum(T)
    omega = float(np.max(np.abs(hull.complex_vertices)))
    rs = max(c.modulus for c in sigma.classes)
    nrm = op_norm(T)
    viol = max(rs - omega, omega - nrm, nrm - 2 * omega, 0.0)
    return _judge("radius_chain", viol, tol, f"r_S={rs:.6g} omega={omega:.6g} norm={nrm:.6g}")


def radius_chain_sampled(T, cloud, sigma=None, tol=TOLERANCES["radius_sampled"],
                         ratio=TOLERANCES["norm_ratio"]):
    sigma = sigma or s_spectrum(T)
    omega = refine_numerical_radius(T, cloud)
    rs = max(c.modulus for c in sigma.classes)
    nrm = op_norm(T)
    viol = max(rs - (omega + tol), omega - nrm - 1e-9, nrm - 2 * omega * (1 + ratio), 0.0)
    return _judge("radius_chain", viol, 0.0,
                  f"r_S={rs:.6g} omega_hat={omega:.6g} norm={nrm:.6g}")


def check_hull_containment(hull, cloud, tol=TOLERANCES["hull_slack"], name="hull_containment"):
    d = distance_to_hull(hull, cloud.points)
    out = np.flatnonzero(d > 0)
    if out.size:
        d[out] = np.minimum(d[out], distance_to_hull(reflect_conj(hull), cloud.points[out]))
    return _judge(name, float(np.max(d)), tol, f"samples={len(cloud)}")


def check_vertex_attainment(T, eig=None, tol=TOLERANCES["attainment"]):
    worst = 0.0
    for z, u in vertex_witnesses(T, eig):
        q = nr_points(T, np.asarray(u)[None])[0]
        rep = q[0] + 1j * np.linalg.norm(q[1:])
        worst = max(worst, abs(rep - z))
    return _judge("vertex_attainment", worst, tol)


def check_oracle_agreement(eig, restarts, seed, tol=TOLERANCES["oracle"]):
    vb = v_bounds(eig)
    ob = real_range_oracle(eig.d.real, eig.d.imag, restarts=restarts, seed=seed)
    res = max(abs(ob.v_min - vb.v_min), abs(ob.v_max - vb.v_max))
    return _judge("oracle_agreement", res, tol,
                  f"v=[{vb.v_min:.6g}, {vb.v_max:.6g}] oracle=[{ob.v_min:.6g}, {ob.v_max:.6g}]")


def check_golden(hull, golden, tol=TOLERANCES["golden"]):
    return _judge("golden_hull", hull_hausdorff(hull, golden), tol)


@dataclass
class VerifyReport:
    checks: list = field(default_factory=list)

    @property
    def ok(self):
        return all(c.status != FAIL for c in self.checks)

    def lines(self):
        return [c.line() for c in self.checks]


def verify_operator(T, level="fast", seed=0, golden=None, threads=1, angles=720, samples=None):
    cfg = dict(LEVELS[level])
    if samples is not None:
        cfg["samples"] = samples
    rng = np.random.default_rng(seed)
    rep = VerifyReport()
    sigma = s_spectrum(T)
    rep.checks.append(check_delta_factor(T, rng))
    rep.checks.append(check_spectral_inclusion(T, sigma))
    rep.checks.append(check_delta_singular(T, sigma))
    cloud = sample_cloud(T, cfg["samples"], seed=seed, threads=threads)

    normal = T.n >= 2 and is_normal(T, 1e-9)
    if normal:
        eig = normalize_eigs(T)
        hull = exact_upper_bild_normal(T, eig)
        rep.checks.append(radius_chain_exact(T, hull, sigma))
        rep.checks.append(check_hull_containment(hull, cloud))
        rep.checks.append(check_vertex_attainment(T, eig))
        if T.n <= 4:
            rep.checks.append(check_oracle_agreement(eig, cfg["restarts"], seed))
        else:
            rep.checks.append(Check("oracle_agreement", SKIPPED, detail="dimension above 4"))
        if golden is not None:
            rep.checks.append(check_golden(hull, golden))
    else:
        hull = None
        rep.checks.append(radius_chain_sampled(T, cloud, sigma))
        for name in ("hull_containment", "vertex_attainment", "oracle_agreement"):
            rep.checks.append(Check(name, SKIPPED, detail="operator is not normal"))
        if golden is not None:
            rep.checks.append(Check("golden_hull", SKIPPED, detail="operator is not normal"))

    if is_complex_operator(T):
        vb = v_bounds(eig) if normal else cloud_real_extremes(cloud, default_im_tol(T), T=T)
        h33 = upper_bild_complex(T, vb, angles, refine_tol=1e-9)
        rep.checks.append(check_hull_containment(h33, cloud, name="complex_upper_bild_containment"))
        if normal:
            rep.checks.append(_judge("complex_vs_normal_hull", hull_hausdorff(h33, hull),
                                     TOLERANCES["hull_agreement"]))
    else:
        rep.checks.append(Check("complex_upper_bild_containment", SKIPPED,
                                detail="not a complex operator in the standard basis"))
    return rep


def load_golden(doc):
    return HullPolygon.from_dict(doc)
