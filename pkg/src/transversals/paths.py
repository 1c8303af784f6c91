"""Explicit paths of non-transversal directions.

:func:`build_boundary_path` leaves a boundary direction ``v`` of the
non-transversal set along a great-circle arc that provably stays
non-transversal until it hits a separating circle.  Two situations occur,
depending on the smallest subfamily certifying that ``v`` is not
transversal:

* two bodies whose projections are separated by a line: rotate ``v``
  towards the side of the first body;
* three bodies whose projections' supporting halfplanes meet in one point:
  rotate ``v`` along the supporting line of the third body.

In both cases the order in which a line would have to meet the first two
bodies contradicts their separating plane.

:func:`connect_to_separators` marches from any non-transversal direction
towards the nearest separating circle and switches to the boundary path
when the march would enter the transversal cone.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import nnls

from .convex import _unit, orthonormal_basis, planar_separation, project
from .errors import (FrameDegenerate, NoWitness, NotBracketed, StartTransversal,
                     ValidationFailed, WitnessNotFound)
from .family import (Family, GreatCircleSet, HellyWitness, direction_depth,
                     helly_witness, separating_circles)

CONSTANT = "CONSTANT"
TWO_BODY = "TWO_BODY"
THREE_BODY = "THREE_BODY"
GEODESIC_MARCH = "GEODESIC_MARCH"

ON_CIRCLE_TOL = 1e-9
BOUNDARY_STEP = 0.015
MARCH_STEP = 0.005


@dataclass
class SpherePath:
    samples: np.ndarray
    stop_angle: float
    case_tag: str
    witness: HellyWitness | None = None
    circle: tuple | None = None
    boundary: "SpherePath | None" = field(default=None, repr=False)

    def __len__(self):
        return self.samples.shape[0]

    @property
    def start(self):
        return self.samples[0]

    @property
    def end(self):
        return self.samples[-1]

    def max_step(self) -> float:
        if len(self) < 2:
            return 0.0
        dots = np.einsum("ij,ij->i", self.samples[:-1], self.samples[1:])
        return float(np.max(np.arccos(np.clip(dots, -1.0, 1.0))))

    def to_dict(self):
        return {
            "version": 1,
            "case_tag": self.case_tag,
            "stop_angle": float(self.stop_angle),
            "witness": None if self.witness is None else {
                "indices": list(self.witness.indices),
                "depth_at_v": float(self.witness.depth_at_v)},
            "circle": None if self.circle is None else list(self.circle),
            "samples": self.samples.tolist(),
        }


def _slerp(a, b, s):
    """Points at fractions ``s`` of the minor arc from ``a`` to ``b``."""
    omega = np.arccos(np.clip(a @ b, -1.0, 1.0))
    s = np.atleast_1d(np.asarray(s, dtype=float))
    if omega < 1e-15:
        return np.repeat(a[None, :], s.size, axis=0)
    so = np.sin(omega)
    out = (np.sin((1.0 - s) * omega)[:, None] * a + np.sin(s * omega)[:, None] * b) / so
    return out / np.linalg.norm(out, axis=1)[:, None]


def bisect_boundary(depth_fn, tau, max_iter=60):
    """Bisection on ``[0, 1]`` for a parameter with ``|depth_fn(s)| <= tau``.

    ``depth_fn(0) < -tau`` and ``depth_fn(1) > tau`` are required.  Returns
    ``(s, depth, iterations)``.
    """
    lo, hi = 0.0, 1.0
    d_lo, d_hi = depth_fn(lo), depth_fn(hi)
    if not (d_lo < -tau and d_hi > tau):
        raise NotBracketed(f"depths {d_lo:.3g} and {d_hi:.3g} do not bracket 0")
    for it in range(1, max_iter + 1):
        mid = 0.5 * (lo + hi)
        d = depth_fn(mid)
        if abs(d) <= tau:
            return mid, d, it
        if d < 0:
            lo = mid
        else:
            hi = mid
    raise NotBracketed(f"no boundary point within {max_iter} bisection steps")


def refine_to_boundary(f: Family, v, w, max_iter=60):
    """Point of the arc from non-transversal ``v`` to transversal ``w`` whose
    depth is within ``tau`` of zero."""
    v, w = _unit(v), _unit(w)
    if v @ w < -1.0 + 1e-12:
        raise NotBracketed("antipodal endpoints do not define a geodesic")

    def depth_at(s):
        return direction_depth(f, _slerp(v, w, s)[0]).depth

    s, _, _ = bisect_boundary(depth_at, f.tau, max_iter)
    return _slerp(v, w, s)[0]


def _arc(v, m, angle, step):
    k = max(int(np.ceil(angle / step)), 1)
    theta = np.linspace(0.0, angle, k + 1)
    pts = np.cos(theta)[:, None] * v + np.sin(theta)[:, None] * m
    return pts / np.linalg.norm(pts, axis=1)[:, None]


def _circle_normal(y: GreatCircleSet, i, j):
    """Normal of the circle of pair ``(i, j)`` with body ``i`` on the negative side."""
    if (i, j) in y.pairs:
        return y.normals[y.pairs.index((i, j))], (i, j)
    return -y.normals[y.pairs.index((j, i))], (j, i)


def _lift(v, q2):
    e1, e2 = orthonormal_basis(v)
    return q2[0] * e1 + q2[1] * e2


def _two_body_path(f, v, y, pair, witness, step):
    k1, k2 = pair
    n, circle = _circle_normal(y, k1, k2)
    if abs(v @ n) <= ON_CIRCLE_TOL:
        return SpherePath(v[None, :].copy(), 0.0, CONSTANT, witness, circle)
    if v @ n < 0:
        k1, k2, n = k2, k1, -n
    u2, _ = planar_separation(project(f.bodies[k1], v), project(f.bodies[k2], v))
    # first body on the positive side of m
    m = _lift(v, -u2)
    alpha = float(np.arctan2(v @ n, -(m @ n)))
    return SpherePath(_arc(v, m, alpha, step), alpha, TWO_BODY, witness, circle)


def _support_normals(f, v, idx):
    """Inward unit normals of supporting lines through the concurrence point.

    The concurrence point is the optimum of the depth LP for the subfamily;
    the normals come from the LP dual restricted to the active halfplanes.
    """
    res = direction_depth(f, v, subset=idx)
    q = res.witness
    rows, owner = [], []
    for pos, i in enumerate(idx):
        a, b = project(f.bodies[i], v).halfplanes()
        for ai, bi in zip(a, b):
            rows.append((ai, bi - ai @ q))
            owner.append(pos)
    clear = np.array([c for _, c in rows])
    tol = 1e-9 * f.diameter + 1e-12
    active = np.flatnonzero(clear <= clear.min() + tol)
    A = np.array([rows[r][0] for r in active]).T
    weight = 1e3
    M = np.vstack([A, weight * np.ones(active.size)])
    lam, _ = nnls(M, np.array([0.0, 0.0, weight]))
    if lam.sum() <= 0 or np.linalg.norm(A @ lam) > 1e-6 * lam.sum():
        raise FrameDegenerate("supporting halfplanes are not concurrent")
    normals = np.zeros((len(idx), 2))
    for r, l in zip(active, lam):
        normals[owner[r]] -= l * rows[r][0]
    lens = np.linalg.norm(normals, axis=1)
    if np.any(lens <= 1e-9 * lam.sum()):
        raise FrameDegenerate("one of the three bodies is not supporting")
    return normals / lens[:, None]


def _three_body_path(f, v, y, idx, witness, step):
    w = _support_normals(f, v, idx)
    best = None
    for c3 in range(3):
        p, q = [k for k in range(3) if k != c3]
        k1, k2 = idx[p], idx[q]
        n, circle = _circle_normal(y, k1, k2)
        if abs(v @ n) <= ON_CIRCLE_TOL:
            return SpherePath(v[None, :].copy(), 0.0, CONSTANT, witness, circle)
        w1, w2 = w[p], w[q]
        if v @ n < 0:
            k1, k2, n, w1, w2 = k2, k1, -n, w2, w1
        e2 = np.array([-w[c3][1], w[c3][0]])
        if w1 @ e2 < 0:
            e2 = -e2
        cond = min(w1 @ e2, -(w2 @ e2))
        if best is None or cond > best[0]:
            best = (cond, e2, n, circle)
    cond, e2, n, circle = best
    if cond <= 1e-6:
        raise FrameDegenerate("no labelling with a < 0 < b")
    e = _lift(v, e2)
    beta = float(np.arctan2(v @ n, -(e @ n)))
    return SpherePath(_arc(v, e, beta, step), beta, THREE_BODY, witness, circle)


def validate_path(f: Family, path: SpherePath, strict_interior=True):
    """Raise :class:`ValidationFailed` unless every sample is
    non-transversal.

    With ``strict_interior`` ambiguous samples are allowed only at the two
    endpoints and, for a march, at the hand-over boundary point.
    """
    d = f.depths(path.samples)
    if np.any(d > f.tau):
        k = int(np.argmax(d))
        raise ValidationFailed(f"sample {k} of {len(d)} is transversal (depth {d[k]:.3g})")
    if strict_interior and len(d) > 2:
        inner = d[1:-1].copy()
        if path.boundary is not None:
            # the boundary point where a march hands over to a boundary path
            inner[len(d) - len(path.boundary) - 1] = -np.inf
        if np.any(inner >= -f.tau):
            k = 1 + int(np.argmax(inner))
            raise ValidationFailed(f"interior sample {k} is ambiguous (depth {d[k]:.3g})")
    return d


def build_boundary_path(f: Family, v, y: GreatCircleSet | None = None,
                        step=BOUNDARY_STEP) -> SpherePath:
    """Path of non-transversal directions from boundary point ``v`` to a
    separating circle."""
    v = _unit(v)
    y = separating_circles(f) if y is None else y
    d = direction_depth(f, v).depth
    if d > f.tau:
        raise StartTransversal(f"start direction is transversal (depth {d:.3g})")
    if y.contains(v, ON_CIRCLE_TOL):
        k = int(np.argmin(np.abs(y.normals @ v)))
        return SpherePath(v[None, :].copy(), 0.0, CONSTANT, None, y.pairs[k])
    try:
        g = helly_witness(f, v)
    except NoWitness as exc:
        raise WitnessNotFound(str(exc)) from exc
    if len(g.indices) == 2:
        path = _two_body_path(f, v, y, g.indices, g, step)
    else:
        try:
            path = _three_body_path(f, v, y, g.indices, g, step)
        except FrameDegenerate:
            pairs = [(a, b) for a in g.indices for b in g.indices if a < b]
            pd = [direction_depth(f, v, subset=p).depth for p in pairs]
            path = _two_body_path(f, v, y, pairs[int(np.argmin(pd))], g, step)
    validate_path(f, path)
    return path


def connect_to_separators(f: Family, x, y: GreatCircleSet | None = None,
                          step=MARCH_STEP) -> SpherePath:
    """Path of non-transversal directions from ``x`` into a separating circle.

    Walks the geodesic towards the nearest circle; if the walk would enter
    the transversal cone, the boundary point in between is located by
    bisection and the path continues with :func:`build_boundary_path`.
    """
    x = _unit(x)
    y = separating_circles(f) if y is None else y
    d0 = direction_depth(f, x).depth
    if d0 > f.tau:
        raise StartTransversal(f"start direction is transversal (depth {d0:.3g})")
    if abs(d0) <= f.tau:
        return build_boundary_path(f, x, y)
    dist = y.angular_distance(x)
    k = int(np.argmin(dist))
    if dist[k] <= ON_CIRCLE_TOL:
        return SpherePath(x[None, :].copy(), 0.0, CONSTANT, None, y.pairs[k])
    n = y.normals[k]
    p = x - (x @ n) * n
    if np.linalg.norm(p) < 1e-12:
        p = orthonormal_basis(n)[0]
    p = p / np.linalg.norm(p)
    tangent = p - (p @ x) * x
    tangent /= np.linalg.norm(tangent)
    phi = float(dist[k])
    march = _arc(x, tangent, phi, step)
    depths = f.depths(march)
    bad = np.flatnonzero(depths[1:] >= -f.tau)
    if bad.size == 0:
        return SpherePath(march, phi, GEODESIC_MARCH, None, y.pairs[k])
    j = int(bad[0]) + 1
    if depths[j] > f.tau:
        b = refine_to_boundary(f, march[j - 1], march[j])
    else:
        b = march[j]
    sub = build_boundary_path(f, b, y)
    samples = np.vstack([march[:j], b[None, :], sub.samples[1:]])
    angle = float(np.arccos(np.clip(x @ b, -1.0, 1.0)))
    return SpherePath(samples, angle, GEODESIC_MARCH, sub.witness, sub.circle, sub)
