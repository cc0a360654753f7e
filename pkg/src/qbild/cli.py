"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 input or usage error.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field


from . import gallery
from .geometry import HullPolygon
from .normal import exact_upper_bild_normal, normalize_eigs, v_bounds
from .numrange import (
    cloud_real_extremes,
    default_im_tol,
    numerical_radius_estimate,
    refine_numerical_radius,
    sample_cloud,
)
from .qmat import is_normal, load_matrix
from .spectrum import delta_min_sv, s_spectrum
from .svg import render_bild_svg
from .verify import TOLERANCES, verify_operator


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    seed: int = 0
    samples: int = 100000
    angles: int = 720
    threads: int = 1
    tolerances: dict = field(default_factory=lambda: dict(TOLERANCES))
    outputs: dict = field(default_factory=dict)


def _positive_int(s):
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s}")
    return v


def _default_seed():
    try:
        return int(os.environ.get("SEED", "0"))
    except ValueError:
        return 0


def _load(path):
    try:
        return load_matrix(path)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read matrix file {path}: {exc}") from exc


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _dumps(obj):
    return json.dumps(obj, indent=2) + "\n"


def cmd_spectrum(args):
    T = _load(args.file)
    sigma = s_spectrum(T)
    doc = {
        "spectrum": [
            dict(entry, delta_min_sv=delta_min_sv(T, c))
            for entry, c in zip(sigma.to_json_list(), sigma.classes)
        ],
        "s_radius": max(c.modulus for c in sigma.classes),
    }
    _write(args.json, _dumps(doc))
    return 0


def cmd_bild(args):
    T = _load(args.file)
    cfg = RunConfig(seed=args.seed, samples=args.samples, angles=args.angles, threads=args.threads)
    cloud = sample_cloud(T, cfg.samples, seed=cfg.seed, threads=cfg.threads)
    _write(args.out, cloud.to_csv())
    if args.out not in (None, "-"):
        _write(args.out + ".witnesses.json", cloud.witnesses_json())
    hull, vb = None, None
    if T.n >= 2 and is_normal(T, 1e-9):
        eig = normalize_eigs(T)
        hull = exact_upper_bild_normal(T, eig)
        vb = v_bounds(eig)
    if args.json:
        doc = hull.to_dict() if hull is not None else {"vertices": None}
        _write(args.json, _dumps(doc))
    if args.svg:
        if vb is None:
            vb = cloud_real_extremes(cloud, default_im_tol(T))
        pts = s_spectrum(T).points()
        _write(args.svg, render_bild_svg(cloud.points, hull, pts, vb, timestamp=not args.no_timestamp))
    return 0


def cmd_verify(args):
    T = _load(args.file)
    golden = None
    if args.golden:
        try:
            with open(args.golden) as fh:
                golden = HullPolygon.from_dict(json.load(fh))
        except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read golden hull {args.golden}: {exc}") from exc
    rep = verify_operator(T, level=args.level, seed=args.seed, golden=golden,
                          threads=args.threads, angles=args.angles, samples=args.samples)
    for line in rep.lines():
        print(line)
    if args.json:
        _write(args.json, _dumps([c.__dict__ for c in rep.checks]))
    return 0 if rep.ok else 1


def cmd_gallery(args):
    d = None
    if args.d:
        d = [complex(s.replace(" ", "").replace("i", "j")) for s in args.d.split(",")]
    try:
        doc = gallery.gallery_document(args.kind, args.n, seed=args.seed, d=d)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    _write(args.out, json.dumps(doc) + "\n")
    return 0


def shift_scan(dims, samples, seed, threads=1):
    rows = []
    for N in dims:
        T = gallery.shift(N)
        cloud = sample_cloud(T, samples, seed=seed, threads=threads)
        raw = numerical_radius_estimate(T, cloud)
        om = refine_numerical_radius(T, cloud)
        rows.append({"N": N, "omega_hat": om, "omega_sampled": raw, "cos_pi_over_N_plus_1": math.cos(math.pi / (N + 1)),
                     "s_spectrum": [[c.re, c.im_norm] for c in s_spectrum(T).classes]})
    return rows


def cmd_shift_scan(args):
    rows = shift_scan(args.dims, args.samples, args.seed, args.threads)
    if args.json:
        _write(args.json, _dumps(rows))
    else:
        print(f"{'N':>4} {'omega_hat':>12} {'cos(pi/(N+1))':>14}")
        for r in rows:
            print(f"{r['N']:>4d} {r['omega_hat']:>12.6f} {r['cos_pi_over_N_plus_1']:>14.6f}")
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="qbild", description="S-spectrum and quaternionic numerical range tools")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, samples=100000):
        sp.add_argument("--seed", type=int, default=_default_seed(), help="RNG seed (default: $SEED or 0)")
        sp.add_argument("--samples", type=_positive_int, default=samples,
                        help="cloud size" + (" (default set by --level)" if samples is None else ""))
        sp.add_argument("--angles", type=_positive_int, default=720, help="support-sweep directions")
        sp.add_argument("--threads", type=_positive_int, default=1, help="sampling workers")

    sp = sub.add_parser("spectrum", help="S-spectrum classes and S-spectral radius")
    sp.add_argument("file")
    sp.add_argument("--json", default=None, help="write JSON here instead of stdout")
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("bild", help="sample the bild; CSV cloud, optional hull JSON and SVG")
    sp.add_argument("file")
    common(sp)
    sp.add_argument("--out", default=None, help="cloud CSV path (stdout if omitted)")
    sp.add_argument("--json", default=None, help="exact upper-bild hull JSON (normal operators)")
    sp.add_argument("--svg", default=None)
    sp.add_argument("--no-timestamp", action="store_true", help="omit the SVG timestamp comment")
    sp.set_defaults(func=cmd_bild)

    sp = sub.add_parser("verify", help="run every applicable structural check")
    sp.add_argument("file")
    common(sp, samples=None)
    sp.add_argument("--level", choices=("fast", "full"), default="fast")
    sp.add_argument("--golden", default=None, help="hull JSON to compare against")
    sp.add_argument("--json", default=None)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("gallery", help="write a gallery operator")
    sp.add_argument("kind", choices=gallery.KINDS)
    sp.add_argument("n", type=_positive_int)
    sp.add_argument("--seed", type=int, default=_default_seed())
    sp.add_argument("--d", default=None, help="comma-separated diagonal, e.g. '1+1i,3+1i'")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_gallery)

    sp = sub.add_parser("shift-scan", help="numerical radius of truncated backward shifts")
    common(sp, samples=20000)
    sp.add_argument("--dims", type=_positive_int, nargs="+", default=[2, 4, 8, 16, 32])
    sp.add_argument("--json", default=None)
    sp.set_defaults(func=cmd_shift_scan)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"qbild: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
