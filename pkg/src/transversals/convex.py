"""Convex primitives: bodies, projections, planar hulls, clearance LPs and
maximum-margin separating planes."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import EmptyInput, NotDisjoint

__all__ = [
    "ConvexBody",
    "Plane3",
    "Poly2",
    "DepthResult",
    "orthonormal_basis",
    "project",
    "hull2d",
    "common_depth",
    "clearance",
    "strict_separator",
    "planar_separation",
    "solve_lp",
    "ball_polytope",
    "min_norm_point",
    "scene_scale",
]

LP_EPS = 1e-12


@dataclass(frozen=True, eq=False)
class ConvexBody:
    """Convex hull of finitely many points in R^3."""

    vertices: np.ndarray
    label: str = ""
    # provenance for bodies that were discretized from a ball
    ball: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float).reshape(-1, 3)
        if v.shape[0] == 0:
            raise EmptyInput("a convex body needs at least one vertex")
        object.__setattr__(self, "vertices", v)

    @property
    def centroid(self) -> np.ndarray:
        return self.vertices.mean(axis=0)

    def __eq__(self, other):
        if not isinstance(other, ConvexBody):
            return NotImplemented
        return (self.label == other.label
                and self.vertices.shape == other.vertices.shape
                and bool(np.all(self.vertices == other.vertices)))

    __hash__ = None


@dataclass(frozen=True)
class Plane3:
    """The plane ``{p : normal . p = offset}``."""

    normal: np.ndarray
    offset: float
    margin: float = 0.0

    def side(self, points) -> np.ndarray:
        return np.asarray(points, dtype=float) @ self.normal - self.offset


@dataclass(frozen=True, eq=False)
class Poly2:
    """Convex polygon, counterclockwise; may be a segment or a point."""

    vertices: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "vertices",
                           np.asarray(self.vertices, dtype=float).reshape(-1, 2))

    @property
    def is_degenerate(self) -> bool:
        return self.vertices.shape[0] < 3

    def halfplanes(self):
        """Outward unit normals ``a`` and offsets ``b`` with ``P = {a.q <= b}``."""
        cap = max(self.vertices.shape[0], 4)
        a = np.empty((cap, 2))
        b = np.empty(cap)
        r = _kernels.halfplanes(self.vertices, a, b, 0)
        return a[:r], b[:r]

    def contains(self, q, tol=1e-9) -> bool:
        a, b = self.halfplanes()
        return bool(np.all(a @ np.asarray(q, dtype=float) <= b + tol))

    def area(self) -> float:
        v = self.vertices
        if v.shape[0] < 3:
            return 0.0
        x, y = v[:, 0], v[:, 1]
        return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


@dataclass(frozen=True)
class DepthResult:
    depth: float
    witness: np.ndarray


def _unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float).reshape(3)
    n = np.linalg.norm(v)
    if abs(n - 1.0) > 1e-12:
        v = v / n
    return v


def orthonormal_basis(v):
    """Return ``(e1, e2)`` spanning the plane orthogonal to ``v``.

    The frame is right-handed (``e1 x e2 = v``) and deterministic.  For the
    antipode ``-v`` the pair is swapped, so projections along ``v`` and
    ``-v`` are exact mirror images of each other.
    """
    return _kernels.orthonormal_basis(_unit(v))


def hull2d(points) -> Poly2:
    pts = np.ascontiguousarray(np.asarray(points, dtype=float).reshape(-1, 2))
    if pts.shape[0] == 0:
        raise EmptyInput("no points")
    return Poly2(_kernels.hull2d(pts))


def project(body: ConvexBody, v) -> Poly2:
    """Orthogonal projection of ``body`` onto ``v``-perp, in the frame of
    :func:`orthonormal_basis`."""
    e1, e2 = orthonormal_basis(v)
    pts = np.column_stack([body.vertices @ e1, body.vertices @ e2])
    return hull2d(pts)


def scene_scale(points) -> tuple[np.ndarray, float]:
    """Center (bounding-box midpoint) and bounding-box diagonal of ``points``."""
    pts = np.asarray(points, dtype=float)
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    diam = float(np.linalg.norm(hi - lo))
    return 0.5 * (lo + hi), diam


def clearance(polys, q) -> float:
    """Smallest halfplane clearance of ``q`` over all ``polys``.

    Positive inside every polygon, negative outside at least one.
    """
    q = np.asarray(q, dtype=float)
    best = np.inf
    for p in polys:
        a, b = p.halfplanes()
        best = min(best, float(np.min(b - a @ q)))
    return best


def common_depth(polys, seed=0) -> DepthResult:
    """Maximal common clearance of a point inside every polygon.

    Solved as the 3-variable LP ``max t`` s.t. ``a.q + t <= b`` for every
    halfplane of every polygon, with ``q`` boxed to ten times the extent of
    the input.  A positive depth means the polygons share interior points.
    """
    polys = list(polys)
    if not polys:
        raise EmptyInput("common_depth needs at least one polygon")
    allpts = np.vstack([p.vertices for p in polys])
    center, diam = scene_scale(allpts)
    if diam == 0.0:
        diam = 1.0
    rows_a, rows_b = [], []
    for p in polys:
        # re-hull: centering can merge nearly coincident vertices
        a, b = hull2d(p.vertices - center).halfplanes()
        rows_a.append(a)
        rows_b.append(b)
    ha = np.ascontiguousarray(np.vstack(rows_a))
    hb = np.ascontiguousarray(np.concatenate(rows_b))
    t, qx, qy = _kernels.max_clearance(ha, hb, ha.shape[0], 10.0 * diam, seed,
                                       LP_EPS * diam)
    return DepthResult(float(t), np.array([qx, qy]) + center)


def solve_lp(A, b, c, lo, hi, seed=0, eps=LP_EPS):
    """Maximize ``c.x`` subject to ``A x <= b`` and ``lo <= x <= hi``.

    Seeded randomized incremental algorithm for 1 to 4 variables.  Returns
    ``(x, value)`` or ``(None, None)`` when infeasible.
    """
    A = np.ascontiguousarray(np.asarray(A, dtype=float))
    b = np.ascontiguousarray(np.asarray(b, dtype=float))
    c = np.ascontiguousarray(np.asarray(c, dtype=float))
    lo = np.ascontiguousarray(np.broadcast_to(np.asarray(lo, dtype=float), c.shape))
    hi = np.ascontiguousarray(np.broadcast_to(np.asarray(hi, dtype=float), c.shape))
    if not 1 <= c.shape[0] <= 4:
        raise ValueError("solve_lp handles 1 to 4 variables")
    norms = np.linalg.norm(A, axis=1)
    norms[norms == 0] = 1.0
    st, x = _kernels.seidel_lp(A / norms[:, None], b / norms, c, lo, hi, seed, eps)
    if st != _kernels.LP_OK:
        return None, None
    return x, float(c @ x)


def min_norm_point(lmo, x0, tol=1e-14, max_iter=500):
    """Wolfe's minimum-norm-point algorithm.

    ``lmo(x)`` must return the point of the polytope minimizing ``x . p``.
    Returns the point of the polytope closest to the origin.
    """
    S = [np.asarray(x0, dtype=float)]
    lam = np.array([1.0])
    x = S[0].copy()
    for _ in range(max_iter):
        p = lmo(x)
        scale = max(float(p @ p), max(float(s @ s) for s in S), 1e-300)
        if x @ x - x @ p <= tol * scale:
            break
        if any(np.array_equal(p, s) for s in S):
            break
        S.append(p)
        lam = np.append(lam, 0.0)
        while True:
            Sm = np.array(S)
            k = len(S)
            M = np.zeros((k + 1, k + 1))
            M[:k, :k] = Sm @ Sm.T
            M[:k, k] = 1.0
            M[k, :k] = 1.0
            rhs = np.zeros(k + 1)
            rhs[k] = 1.0
            mu = np.linalg.lstsq(M, rhs, rcond=None)[0][:k]
            if np.all(mu > 1e-14):
                lam = mu
                x = mu @ Sm
                break
            neg = mu <= 1e-14
            den = lam - mu
            ok = neg & (den > 0)
            theta = float(np.min(lam[ok] / den[ok])) if ok.any() else 0.0
            lam = (1.0 - theta) * lam + theta * mu
            keep = lam > 1e-14
            if not keep.any():
                keep[np.argmax(lam)] = True
            S = [s for s, kflag in zip(S, keep) if kflag]
            lam = lam[keep]
            lam = lam / lam.sum()
            x = lam @ np.array(S)
    return x


def strict_separator(a: ConvexBody, b: ConvexBody, tau_sep=None) -> Plane3:
    """Maximum-margin plane with ``a`` strictly on the negative side.

    The plane is the perpendicular bisector of the closest pair of points of
    the two hulls; ``margin`` is half their distance.  Raises
    :class:`NotDisjoint` when the margin does not exceed ``tau_sep``
    (default ``1e-7`` times the pair's extent).
    """
    A = a.vertices
    B = b.vertices
    if tau_sep is None:
        tau_sep = 1e-7 * scene_scale(np.vstack([A, B]))[1]

    def lmo(x):
        return B[np.argmin(B @ x)] - A[np.argmax(A @ x)]

    x = min_norm_point(lmo, b.centroid - a.centroid)
    dist = float(np.linalg.norm(x))
    if dist == 0.0:
        raise NotDisjoint(f"bodies {a.label!r} and {b.label!r} intersect")
    n = x / dist
    hi_a = float(np.max(A @ n))
    lo_b = float(np.min(B @ n))
    margin = 0.5 * (lo_b - hi_a)
    if margin <= tau_sep:
        raise NotDisjoint(
            f"bodies {a.label!r} and {b.label!r} are not strictly separated "
            f"(margin {margin:.3g})")
    return Plane3(n, 0.5 * (lo_b + hi_a), margin)


def _nearest_on_polygon(H, q):
    k = H.shape[0]
    if k == 1:
        return H[0].copy(), float(np.linalg.norm(q - H[0]))
    best, arg = np.inf, H[0]
    for i in range(k if k > 2 else 1):
        p0 = H[i]
        p1 = H[(i + 1) % k]
        d = p1 - p0
        dd = d @ d
        s = 0.0 if dd == 0 else min(max((q - p0) @ d / dd, 0.0), 1.0)
        c = p0 + s * d
        dist = np.linalg.norm(q - c)
        if dist < best:
            best, arg = dist, c
    return arg, best


def planar_separation(P: Poly2, Q: Poly2):
    """Best separating direction between two planar convex sets.

    Returns ``(u, gap)`` with ``u`` a unit vector such that
    ``u.p <= u.q - gap`` for all ``p`` in ``P`` and ``q`` in ``Q``, the gap
    being as large as possible.  A negative gap is the overlap along ``u``.
    """
    diff = (P.vertices[:, None, :] - Q.vertices[None, :, :]).reshape(-1, 2)
    D = hull2d(diff)
    a, b = D.halfplanes()
    origin = np.zeros(2)
    if np.all(b >= 0.0):
        i = int(np.argmin(b))
        return a[i].copy(), -float(b[i])
    near, dist = _nearest_on_polygon(D.vertices, origin)
    u = -near / dist
    return u, float(dist)


def _fibonacci_sphere(n):
    i = np.arange(n) + 0.5
    z = 1.0 - 2.0 * i / n
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    phi = np.pi * (3.0 - np.sqrt(5.0)) * i
    return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])


def ball_polytope(center, radius, facets=80, label="") -> ConvexBody:
    """Polytope circumscribing a ball, with about ``facets`` triangular facets."""
    from scipy.spatial import ConvexHull

    n = max(facets // 2 + 2, 4)
    u = _fibonacci_sphere(n)
    inrad = float(np.min(-ConvexHull(u).equations[:, 3]))
    c = np.asarray(center, dtype=float).reshape(3)
    verts = c + u * (radius / inrad)
    return ConvexBody(verts, label, ball=(tuple(c.tolist()), float(radius), int(facets)))
