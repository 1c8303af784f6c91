"""Transversal directions and lines of a family of disjoint convex bodies.

A direction ``v`` is transversal when the projections of all bodies onto
``v``-perp share a point.  Openness of the bodies is modelled by a signed
clearance ("depth") and a tolerance ``tau``: depth above ``tau`` is
transversal, below ``-tau`` non-transversal, anything between is ambiguous.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass

import numba
import numpy as np
from scipy.optimize import linprog

from . import _kernels
from .convex import (LP_EPS, ConvexBody, DepthResult, Plane3, Poly2, _nearest_on_polygon,
                     _unit, hull2d, orthonormal_basis, project, scene_scale,
                     strict_separator)
from .errors import NoWitness, NotTransversal

TRANSVERSAL = 1
AMBIGUOUS = 0
NON_TRANSVERSAL = -1

LABEL_NAMES = {TRANSVERSAL: "TRANSVERSAL", AMBIGUOUS: "AMBIGUOUS",
               NON_TRANSVERSAL: "NON_TRANSVERSAL"}

DEFAULT_REL_TOL = 1e-7


def set_threads_from_env():
    """Honour ``TRANSVERSAL_THREADS`` as a cap on numba parallelism."""
    cap = os.environ.get("TRANSVERSAL_THREADS")
    if cap:
        numba.set_num_threads(max(1, min(int(cap), numba.config.NUMBA_NUM_THREADS)))


@dataclass(frozen=True)
class DirectedLine:
    origin: np.ndarray
    direction: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "origin", np.asarray(self.origin, dtype=float).reshape(3))
        object.__setattr__(self, "direction", _unit(self.direction))

    def reversed(self) -> "DirectedLine":
        return DirectedLine(self.origin, -self.direction)

    def point(self, s):
        return self.origin + s * self.direction


@dataclass(frozen=True)
class GreatCircleSet:
    """Separating directions: one great circle ``{x : x.n = 0}`` per body pair."""

    normals: np.ndarray
    pairs: tuple

    def __len__(self):
        return len(self.pairs)

    def angular_distance(self, x) -> np.ndarray:
        """Angle from ``x`` to each circle."""
        return np.arcsin(np.clip(np.abs(self.normals @ _unit(x)), 0.0, 1.0))

    def contains(self, x, tol=1e-6) -> bool:
        return len(self) > 0 and float(np.min(np.abs(self.normals @ _unit(x)))) <= tol


@dataclass(frozen=True)
class HellyWitness:
    indices: tuple
    depth_at_v: float


class Family:
    """Ordered, immutable family of pairwise disjoint convex bodies.

    Pairwise maximum-margin separators are computed at construction, which
    also certifies disjointness (:class:`~transversals.errors.NotDisjoint`
    otherwise).

    Parameters
    ----------
    bodies : sequence of ConvexBody
    tau : float, optional
        Openness tolerance on depths; defaults to ``1e-7`` times the scene
        diameter (bounding-box diagonal).
    tau_sep : float, optional
        Minimum accepted separator margin; defaults to ``tau``.
    tau_line : float, optional
        Incidence tolerance for lines against bodies; defaults to ``tau``.
    """

    def __init__(self, bodies, tau=None, tau_sep=None, tau_line=None):
        bodies = tuple(bodies)
        if len(bodies) < 2:
            raise ValueError("a family needs at least two bodies")
        self.bodies = bodies
        self.verts = np.ascontiguousarray(np.vstack([b.vertices for b in bodies]))
        sizes = [b.vertices.shape[0] for b in bodies]
        self.ptr = np.concatenate([[0], np.cumsum(sizes)]).astype(np.int64)
        self.center, diam = scene_scale(self.verts)
        self.diameter = diam if diam > 0 else 1.0
        self.tau = DEFAULT_REL_TOL * self.diameter if tau is None else float(tau)
        self.tau_sep = self.tau if tau_sep is None else float(tau_sep)
        self.tau_line = self.tau if tau_line is None else float(tau_line)
        self.separators = {}
        for i, j in itertools.combinations(range(len(bodies)), 2):
            self.separators[i, j] = strict_separator(bodies[i], bodies[j], self.tau_sep)
        self._sub = {}

    def __len__(self):
        return len(self.bodies)

    @property
    def box(self) -> float:
        return 10.0 * self.diameter

    @property
    def lp_eps(self) -> float:
        return LP_EPS * self.diameter

    def separator(self, i, j) -> Plane3:
        """Separator with body ``i`` on the negative side."""
        if i < j:
            return self.separators[i, j]
        p = self.separators[j, i]
        return Plane3(-p.normal, -p.offset, p.margin)

    def label_of(self, depth):
        depth = np.asarray(depth)
        out = np.where(depth > self.tau, TRANSVERSAL,
                       np.where(depth < -self.tau, NON_TRANSVERSAL, AMBIGUOUS))
        return int(out) if out.ndim == 0 else out

    def _arrays(self, subset):
        if subset is None:
            return self.verts, self.ptr
        key = tuple(subset)
        if key not in self._sub:
            vs = [self.bodies[i].vertices for i in key]
            sizes = [v.shape[0] for v in vs]
            self._sub[key] = (np.ascontiguousarray(np.vstack(vs)),
                              np.concatenate([[0], np.cumsum(sizes)]).astype(np.int64))
        return self._sub[key]

    def depths(self, dirs, seeds=None, subset=None, witnesses=False):
        """Signed depth for many directions at once (parallel kernel)."""
        dirs = np.asarray(dirs, dtype=float).reshape(-1, 3)
        dirs = np.ascontiguousarray(dirs / np.linalg.norm(dirs, axis=1)[:, None])
        if seeds is None:
            seeds = np.arange(dirs.shape[0], dtype=np.int64)
        seeds = np.ascontiguousarray(np.asarray(seeds, dtype=np.int64))
        verts, ptr = self._arrays(subset)
        set_threads_from_env()
        out = _kernels.direction_depths(verts, ptr, dirs, self.center, self.box,
                                        seeds, self.lp_eps)
        if witnesses:
            return out[:, 0], out[:, 1:]
        return out[:, 0]


def direction_depth(f: Family, v, seed=0, subset=None) -> DepthResult:
    """Signed common clearance of the projections of ``f`` along ``v``.

    The witness is given in the frame of :func:`orthonormal_basis`.
    """
    v = _unit(v)
    verts, ptr = f._arrays(subset)
    t, qx, qy = _kernels.direction_depth_one(verts, ptr, v, f.center, f.box, seed,
                                             f.lp_eps)
    e1, e2 = orthonormal_basis(v)
    return DepthResult(float(t), np.array([qx + e1 @ f.center, qy + e2 @ f.center]))


def classify_direction(f: Family, v) -> int:
    return f.label_of(direction_depth(f, v).depth)


def _clip(poly, a, b):
    """Clip a convex polygon (k x 2 array) by the halfplane ``a.q <= b``."""
    out = []
    k = len(poly)
    for i in range(k):
        p, q = poly[i], poly[(i + 1) % k]
        sp = a @ p - b
        sq = a @ q - b
        if sp <= 0:
            out.append(p)
        if (sp < 0 < sq) or (sq < 0 < sp):
            out.append(p + (q - p) * (sp / (sp - sq)))
    return np.array(out).reshape(-1, 2)


def fiber_polygon(f: Family, v) -> Poly2 | None:
    """Common intersection of the projections, or ``None`` when the
    direction is not (strictly) transversal.

    Each point of the returned polygon is one directed transversal line with
    direction ``v``.
    """
    v = _unit(v)
    if direction_depth(f, v).depth <= f.tau:
        return None
    polys = [project(b, v) for b in f.bodies]
    cur = polys[0].vertices
    for p in polys[1:]:
        a, b = p.halfplanes()
        for ai, bi in zip(a, b):
            cur = _clip(cur, ai, bi)
            if len(cur) == 0:
                return None
    return hull2d(cur)


def separating_circles(f: Family) -> GreatCircleSet:
    pairs = tuple(sorted(f.separators))
    normals = np.array([f.separators[p].normal for p in pairs])
    return GreatCircleSet(normals, pairs)


def helly_witness(f: Family, v) -> HellyWitness:
    """Smallest subfamily (2 or 3 bodies) whose projections along ``v``
    already fail to share a point with clearance above ``tau``.

    Pairs are scanned before triples, each in lexicographic order.
    """
    v = _unit(v)
    full = direction_depth(f, v).depth
    if full > f.tau:
        raise NoWitness(f"direction is strictly transversal (depth {full:.3g})")
    n = len(f)
    for size in (2, 3):
        for idx in itertools.combinations(range(n), size):
            d = direction_depth(f, v, subset=idx).depth
            if d <= f.tau:
                return HellyWitness(idx, d)
    # Helly guarantees a witness of size <= 3 in exact arithmetic
    raise NoWitness("no subfamily of size <= 3 certifies the direction")


def _line_point2d(line: DirectedLine):
    e1, e2 = orthonormal_basis(line.direction)
    return e1, e2, np.array([line.origin @ e1, line.origin @ e2])


def line_body_distance(body: ConvexBody, line: DirectedLine) -> float:
    """Euclidean distance between ``line`` and the hull of ``body``."""
    P = project(body, line.direction)
    _, _, p = _line_point2d(line)
    a, b = P.halfplanes()
    if P.vertices.shape[0] >= 3 and np.all(a @ p <= b):
        return 0.0
    return _nearest_on_polygon(P.vertices, p)[1]


def is_line_transversal(f, line: DirectedLine, tau_line=None) -> bool:
    """Whether ``line`` meets every body (distance below ``tau_line``).

    ``f`` may be a :class:`Family` or a plain sequence of bodies.
    """
    bodies = f.bodies if isinstance(f, Family) else tuple(f)
    if tau_line is None:
        if isinstance(f, Family):
            tau_line = f.tau_line
        else:
            tau_line = DEFAULT_REL_TOL * scene_scale(np.vstack([b.vertices for b in bodies]))[1]
    return all(line_body_distance(b, line) < tau_line for b in bodies)


def line_body_interval(body: ConvexBody, line: DirectedLine):
    """Parameter interval ``[s0, s1]`` of ``line`` inside the hull of ``body``.

    When the line only grazes the body, it is moved onto the nearest point
    of the body's projection first, so tangent lines get a (short) interval.
    """
    e1, e2, p = _line_point2d(line)
    V = body.vertices
    P = np.column_stack([V @ e1, V @ e2])
    poly = hull2d(P)
    a, b = poly.halfplanes()
    if not (poly.vertices.shape[0] >= 3 and np.all(a @ p <= b)):
        p = _nearest_on_polygon(poly.vertices, p)[0]
    h = (V - line.origin) @ line.direction
    A_eq = np.vstack([P.T, np.ones(len(V))])
    b_eq = np.concatenate([p, [1.0]])
    res = []
    for sgn in (1.0, -1.0):
        r = linprog(sgn * h, A_eq=A_eq, b_eq=b_eq, bounds=(0, None), method="highs")
        if r.status != 0:
            # the nearest-point shift leaves only rounding-level infeasibility
            j = int(np.argmin(np.linalg.norm(P - p, axis=1)))
            res.append(float(h[j]))
        else:
            res.append(float(h @ r.x))
    return res[0], res[1]


def geometric_permutation(f: Family, line: DirectedLine, tau_line=None) -> tuple:
    """Order in which ``line`` meets the bodies (sorted entry parameters).

    Bodies met in a piece shorter than ``tau_line`` are ranked by the
    midpoint of that piece; ties are broken by index.
    """
    if not is_line_transversal(f, line, tau_line):
        raise NotTransversal("line misses at least one body")
    tol = f.tau_line if tau_line is None else tau_line
    keys = []
    for i, body in enumerate(f.bodies):
        s0, s1 = line_body_interval(body, line)
        s = 0.5 * (s0 + s1) if s1 - s0 < tol else s0
        keys.append((s, i))
    return tuple(i for _, i in sorted(keys))


def transversal_line(f: Family, v, seed=0) -> DirectedLine | None:
    """The deepest directed transversal line with direction ``v``, if any."""
    v = _unit(v)
    res = direction_depth(f, v, seed=seed)
    if res.depth <= f.tau:
        return None
    e1, e2 = orthonormal_basis(v)
    return DirectedLine(res.witness[0] * e1 + res.witness[1] * e2, v)
