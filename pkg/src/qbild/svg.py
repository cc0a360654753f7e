"""Self-contained SVG rendering of a bild cloud and its hull."""
from __future__ import annotations

import datetime

import numpy as np

MAX_CLOUD_POINTS = 5000


def _fmt(v):
    return f"{v:.6g}"


def render_bild_svg(cloud_points, hull=None, spectrum_points=(), v_bounds=None,
                    width=640, timestamp=True):
    pts = np.asarray(cloud_points, dtype=complex)[:MAX_CLOUD_POINTS]
    box = [pts] if hull is None else [hull.complex_vertices]
    sp = np.asarray(list(spectrum_points), dtype=complex)
    allp = np.concatenate(box + [sp, pts[:1]])
    xmin, xmax = allp.real.min(), allp.real.max()
    ymin, ymax = min(allp.imag.min(), 0.0), allp.imag.max()
    w = max(xmax - xmin, 1e-9)
    h = max(ymax - ymin, 1e-9)
    mx, my = 0.1 * w, 0.1 * h
    vx, vy, vw, vh = xmin - mx, -(ymax + my), w + 2 * mx, h + 2 * my
    r = 0.004 * max(vw, vh)
    height = int(round(width * vh / vw))
    out = ['<?xml version="1.0" encoding="UTF-8"?>']
    if timestamp:
        out.append(f"<!-- generated {datetime.datetime.now(datetime.timezone.utc).isoformat()} -->")
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="{_fmt(vx)} {_fmt(vy)} {_fmt(vw)} {_fmt(vh)}">'
    )
    out.append(f'<rect x="{_fmt(vx)}" y="{_fmt(vy)}" width="{_fmt(vw)}" height="{_fmt(vh)}" style="fill:white"/>')
    out.append(
        f'<line x1="{_fmt(vx)}" y1="0" x2="{_fmt(vx + vw)}" y2="0" '
        f'style="stroke:#999;stroke-width:{_fmt(r / 3)}"/>'
    )
    out.append('<g style="fill:#4477aa;fill-opacity:0.35">')
    for p in pts:
        out.append(f'<circle cx="{_fmt(p.real)}" cy="{_fmt(-p.imag)}" r="{_fmt(r / 2)}"/>')
    out.append("</g>")
    if hull is not None:
        coords = " ".join(f"{_fmt(x)},{_fmt(-y)}" for x, y in hull.vertices)
        out.append(
            f'<polygon points="{coords}" style="fill:none;stroke:#cc3311;stroke-width:{_fmt(r / 2)}"/>'
        )
    for p in sp:
        out.append(
            f'<circle cx="{_fmt(p.real)}" cy="{_fmt(-p.imag)}" r="{_fmt(1.5 * r)}" '
            f'style="fill:#228833;stroke:black;stroke-width:{_fmt(r / 5)}"/>'
        )
    if v_bounds is not None and not v_bounds.empty:
        for v in (v_bounds.v_min, v_bounds.v_max):
            out.append(
                f'<line x1="{_fmt(v)}" y1="{_fmt(-3 * r)}" x2="{_fmt(v)}" y2="{_fmt(3 * r)}" '
                f'style="stroke:black;stroke-width:{_fmt(r / 2)}"/>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"
