"""Scene generators.

The ruled-surface family lives on the saddle ``z = xy``.  Its lines
``x = i`` carry three segments whose only common transversals are the lines
``ell_b = {y = b, z = b x}`` for ``b`` in ``[1, 2]``; a fourth body cut from
the curve ``x (y - 4) = 1`` of the same surface selects the admissible
``b`` values.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull

from .convex import ConvexBody, scene_scale
from .errors import (DisjointnessFailure, EpsTooLarge, NotDisjoint, OutOfRange,
                     PlacementFailure)
from .family import Family
from .sphere import build_mesh


@dataclass(frozen=True)
class CantorSpec:
    """Finite stage of the middle-thirds Cantor set, rescaled to [1, 2]."""

    stage: int = 0
    samples_per_interval: int = 2

    def __post_init__(self):
        if int(self.stage) != self.stage or self.stage < 0:
            raise ValueError(f"stage must be a non-negative integer, got {self.stage!r}")
        if self.samples_per_interval < 2:
            raise ValueError("samples_per_interval must be at least 2")

    @property
    def intervals(self) -> list:
        iv = [(1.0, 2.0)]
        for _ in range(self.stage):
            nxt = []
            for a, b in iv:
                w = (b - a) / 3.0
                nxt.append((a, a + w))
                nxt.append((b - w, b))
            iv = nxt
        return iv

    @property
    def min_gap(self) -> float:
        """Smallest distance between consecutive intervals (inf at stage 0)."""
        iv = self.intervals
        if len(iv) < 2:
            return np.inf
        return min(b0 - a1 for (_, a1), (b0, _) in zip(iv[:-1], iv[1:]))

    def samples(self) -> np.ndarray:
        return np.concatenate([np.linspace(a, b, self.samples_per_interval)
                               for a, b in self.intervals])


def ruled_segments() -> list:
    """Segments ``S_i`` on the lines ``x = i`` of ``z = xy``, ``1 <= y <= 2``."""
    return [ConvexBody([[i, 1.0, i], [i, 2.0, 2.0 * i]], label=f"S{i}")
            for i in (1, 2, 3)]


def hyperbola_point(c) -> np.ndarray:
    """``(1/(c-4), c, c/(c-4))``: on ``z = xy`` and on ``x (y - 4) = 1``."""
    if not 1.0 <= c <= 2.0:
        raise OutOfRange(f"c must lie in [1, 2], got {c!r}")
    return np.array([1.0 / (c - 4.0), c, c / (c - 4.0)])


def cantor_family(spec: CantorSpec, **family_kw) -> Family:
    """The three ruled segments plus the hull of the sampled curve points."""
    pts = np.array([hyperbola_point(c) for c in spec.samples()])
    s4 = ConvexBody(pts, label="S4")
    try:
        return Family(ruled_segments() + [s4], **family_kw)
    except NotDisjoint as exc:  # pragma: no cover - geometric impossibility
        raise DisjointnessFailure(str(exc)) from exc


def curve_direction(b) -> np.ndarray:
    """Unit direction of ``ell_b``."""
    d = np.array([1.0, 0.0, b])
    return d / np.linalg.norm(d)


def probe_direction_curve(f: Family, b_grid):
    """Depth at the direction of ``ell_b`` for every ``b`` in the grid."""
    b_grid = np.asarray(b_grid, dtype=float)
    if b_grid.size and (b_grid.min() < 0.5 or b_grid.max() > 2.5):
        raise OutOfRange("b_grid must lie in [0.5, 2.5]")
    dirs = np.column_stack([np.ones_like(b_grid), np.zeros_like(b_grid), b_grid])
    depths = f.depths(dirs)
    return list(zip(b_grid.tolist(), depths.tolist()))


def curve_tolerance(f: Family, rel=1e-7) -> float:
    """Default acceptance threshold for near-transversal curve probes."""
    return rel * f.diameter


def count_clusters(probe, tau_curve, gap):
    """Number of runs of ``{b : depth >= -tau_curve}`` separated by more
    than ``gap``."""
    bs = np.array([b for b, d in probe if d >= -tau_curve])
    if bs.size == 0:
        return 0
    bs.sort()
    return int(1 + np.count_nonzero(np.diff(bs) > gap))


def inflate(f: Family, eps) -> Family:
    """Minkowski sum of every body with a 42-vertex polytope of radius ``eps``."""
    min_margin = min(p.margin for p in f.separators.values())
    if not eps > 0:
        raise EpsTooLarge(f"eps must be positive, got {eps!r}")
    if eps >= 0.5 * min_margin:
        raise EpsTooLarge(f"eps={eps} must stay below half the smallest margin "
                          f"({0.5 * min_margin:.4g})")
    u = build_mesh(1).vertices
    bodies = []
    for b in f.bodies:
        v = (b.vertices[:, None, :] + eps * u[None, :, :]).reshape(-1, 3)
        # inflated bodies are full-dimensional; keep only extreme points
        v = v[np.sort(ConvexHull(v).vertices)]
        bodies.append(ConvexBody(v, label=b.label))
    return Family(bodies)


def _random_polytope(rng, center, radius, m):
    d = rng.normal(size=(m, 3))
    d /= np.linalg.norm(d, axis=1)[:, None]
    axes = rng.uniform(0.6, 1.0, size=3)
    return center + radius * d * axes


def random_disjoint_family(n, seed, max_tries=10_000) -> Family:
    """``n`` random polytopes (8 to 20 vertices) strung roughly along a line.

    Bodies are placed by rejection sampling until every pairwise separator
    margin exceeds ``0.05`` times the scene diameter.  Deterministic in
    ``seed``.
    """
    if not 2 <= n <= 12:
        raise ValueError(f"n must be in [2, 12], got {n!r}")
    rng = np.random.default_rng(seed)
    axis = rng.normal(size=3)
    axis /= np.linalg.norm(axis)
    for _ in range(max_tries):
        bodies = []
        for i in range(n):
            c = axis * 3.0 * i + rng.normal(scale=0.35, size=3)
            m = int(rng.integers(8, 21))
            r = rng.uniform(0.7, 1.1)
            bodies.append(ConvexBody(_random_polytope(rng, c, r, m), label=f"P{i}"))
        diam = scene_scale(np.vstack([b.vertices for b in bodies]))[1]
        try:
            fam = Family(bodies)
        except NotDisjoint:
            continue
        if min(p.margin for p in fam.separators.values()) > 0.05 * diam:
            return fam
    raise PlacementFailure(f"no admissible placement after {max_tries} tries")
