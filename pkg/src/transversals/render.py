"""Static SVG maps of sphere classifications.

Two orthographic disks: the upper hemisphere seen from +z on the left, the
lower hemisphere seen from -z on the right.  Output is byte-stable for a
fixed input (fixed coordinate precision, deterministic ordering).
"""
from __future__ import annotations

import numpy as np

from .convex import orthonormal_basis
from .family import AMBIGUOUS, TRANSVERSAL
from .sphere import components

RADIUS = 200.0
CENTERS = ((220.0, 220.0), (660.0, 220.0))
WIDTH, HEIGHT = 880, 440

COLORS = {
    "background": "#f4f1ea",
    "non-transversal": "#d9dde3",
    "transversal": "#c0392b",
    "ambiguous": "#f1c40f",
    "circle": "#2c3e50",
    "path": "#1f6fb2",
}


def _xy(p, hemi):
    cx, cy = CENTERS[hemi]
    x = -p[0] if hemi == 1 else p[0]
    return cx + RADIUS * x, cy - RADIUS * p[1]


def _fmt(x):
    s = f"{x:.2f}"
    return "0.00" if s == "-0.00" else s


def _points(pts, hemi):
    return " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in (_xy(p, hemi) for p in pts))


def _face_polygons(mesh, faces, css):
    out = []
    for fi in faces:
        hemi = 0 if mesh.centroids[fi, 2] >= 0 else 1
        out.append(f'    <polygon class="{css}" points="{_points(mesh.vertices[mesh.faces[fi]], hemi)}"/>')
    return out


def _circle_polylines(normal, pair, n=360):
    e1, e2 = orthonormal_basis(normal)
    t = np.linspace(0.0, 2.0 * np.pi, n + 1)
    pts = np.cos(t)[:, None] * e1 + np.sin(t)[:, None] * e2
    hemi = (pts[:, 2] < 0).astype(int)
    # split into runs that stay on one hemisphere
    cuts = np.flatnonzero(np.diff(hemi)) + 1
    out = []
    for run in np.split(np.arange(n + 1), cuts):
        if run.size >= 2:
            out.append(f'    <polyline class="circle" data-pair="{pair[0]}-{pair[1]}" '
                       f'points="{_points(pts[run], hemi[run[0]])}"/>')
    return out


def render_sphere_svg(classification=None, circles=None, path=None, title=None) -> str:
    """SVG document for a classification, separating circles and/or a path.

    Each connected component of transversal faces is one
    ``<g class="region transversal">`` group; ambiguous faces form one
    group; non-transversal directions are the disk background.  A path is
    drawn as one ``<polyline class="path-segment">`` per pair of
    consecutive samples.
    """
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        "  <style>",
        f"    .hemisphere {{ fill: {COLORS['non-transversal']}; stroke: #333; stroke-width: 1; }}",
        f"    .transversal {{ fill: {COLORS['transversal']}; stroke: none; }}",
        f"    .ambiguous {{ fill: {COLORS['ambiguous']}; stroke: none; }}",
        f"    .circle {{ fill: none; stroke: {COLORS['circle']}; stroke-width: 1; }}",
        f"    .path-segment {{ fill: none; stroke: {COLORS['path']}; stroke-width: 2; }}",
        "  </style>",
        f'  <rect width="{WIDTH}" height="{HEIGHT}" fill="{COLORS["background"]}"/>',
    ]
    if title:
        lines.append(f"  <title>{title}</title>")
    for hemi, (cx, cy) in enumerate(CENTERS):
        name = "upper" if hemi == 0 else "lower"
        lines.append(f'  <circle class="hemisphere" data-hemisphere="{name}" '
                     f'cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(RADIUS)}"/>')
    if classification is not None:
        mesh = classification.mesh
        rep = components(classification, TRANSVERSAL)
        for i, comp in enumerate(rep.components):
            lines.append(f'  <g class="region transversal" data-component="{i}">')
            lines.extend(_face_polygons(mesh, comp.faces, "transversal"))
            lines.append("  </g>")
        amb = np.flatnonzero(classification.labels == AMBIGUOUS)
        if amb.size:
            lines.append('  <g class="region ambiguous">')
            lines.extend(_face_polygons(mesh, amb, "ambiguous"))
            lines.append("  </g>")
    if circles is not None and len(circles):
        lines.append('  <g class="separating-circles">')
        for n, pair in zip(circles.normals, circles.pairs):
            lines.extend(_circle_polylines(n, pair))
        lines.append("  </g>")
    if path is not None:
        s = path.samples
        lines.append(f'  <g class="path" data-case="{path.case_tag}">')
        for k in range(len(s) - 1):
            mid = s[k] + s[k + 1]
            hemi = 0 if mid[2] >= 0 else 1
            lines.append(f'    <polyline class="path-segment" points="{_points(s[k:k + 2], hemi)}"/>')
        lines.append("  </g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
