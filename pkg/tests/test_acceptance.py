"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line that is printed in the pytest summary
(section "acceptance criteria").  Run directly with
``python3 tests/test_acceptance.py`` for the same report.
"""
import time

import numpy as np
import pytest
from scipy.cluster.hierarchy import fcluster, linkage
from scipy.spatial import ConvexHull

from conftest import ACCEPTANCE, box
from transversals import (TRANSVERSAL, CantorSpec, Family, build_boundary_path,
                          cantor_family, common_depth, connect_to_separators,
                          contractibility_report, count_clusters, curve_tolerance,
                          direction_depth, fiber_polygon, geometric_permutation, hull2d, inflate,
                          probe_direction_curve, random_disjoint_family, refine_to_boundary,
                          orthonormal_basis, separating_circles, transversal_line,
                          validate_path)
from transversals.errors import TransversalError, ValidationFailed

STRESS_SEEDS = range(20)
STRESS_LEVEL = 5


def record(k, title, ok, detail):
    ACCEPTANCE[k] = (bool(ok), title, detail)
    assert ok, detail


def stress_family(seed):
    return random_disjoint_family(2 + seed % 5, seed)


@pytest.fixture(scope="module")
def stress_reports():
    t0 = time.perf_counter()
    out = []
    for seed in STRESS_SEEDS:
        f = stress_family(seed)
        out.append((f, contractibility_report(f, level=STRESS_LEVEL, raise_inconclusive=False)))
    return out, time.perf_counter() - t0


@pytest.fixture(scope="module")
def cubes():
    return Family([box((-1, -1, -4), (1, 1, -2), "bottom"), box((-1, -1, 2), (1, 1, 4), "top")])


def test_1_stress_suite(stress_reports):
    reports, wall = stress_reports
    bad = [seed for seed, (_, r) in zip(STRESS_SEEDS, reports)
           if not (r.verdict == "PASS" and r.complement_connected and r.ambiguous_fraction < 0.02
                   and all(c.euler_characteristic == 1 for c in r.transversal.components))]
    ncomp = [r.directed_count for _, r in reports]
    record(1, "stress suite, 20 random families at level 5", not bad and wall < 60.0,
           f"failing seeds {bad}, directed components {ncomp}, {wall:.1f} s")


def test_2_two_cube_oracle(cubes):
    rows = []
    ok = True
    for level in (4, 5):
        r = contractibility_report(cubes, level=level)
        chi_t = [c.euler_characteristic for c in r.transversal.components]
        chi_n = [c.euler_characteristic for c in r.complement.components]
        ok &= (r.directed_count == 2 and chi_t == [1, 1] and chi_n == [0]
               and r.undirected_count == 1 and r.antipodal_pairs == [(0, 1)])
        rows.append(f"L{level}: T chi {chi_t}, N chi {chi_n}, undirected {r.undirected_count}")
    record(2, "two-cube scene components", ok, "; ".join(rows))


def _path_scenes():
    """Ten random scenes with a transversal cone of positive measure."""
    scenes = []
    seed = 100
    while len(scenes) < 10:
        f = random_disjoint_family(2 + seed % 4, seed)
        r = contractibility_report(f, level=3, raise_inconclusive=False)
        if r.directed_count > 0:
            scenes.append((f, r.classification))
        seed += 1
    return scenes


def test_3_boundary_paths():
    rng = np.random.default_rng(3)
    n_paths = failures = 0
    worst_depth = -np.inf
    worst_end = 0.0
    for f, cls in _path_scenes():
        y = separating_circles(f)
        t_dirs = cls.mesh.centroids[cls.labels == TRANSVERSAL]
        n_dirs = cls.mesh.centroids[cls.depths < -f.tau]
        for _ in range(5):
            w = t_dirs[rng.integers(len(t_dirs))]
            v = n_dirs[rng.integers(len(n_dirs))]
            if v @ w < -0.999:
                v = n_dirs[rng.integers(len(n_dirs))]
            b = refine_to_boundary(f, v, w)
            try:
                p = build_boundary_path(f, b, y)
            except ValidationFailed:
                failures += 1
                continue
            n_paths += 1
            worst_depth = max(worst_depth, float(np.max(f.depths(p.samples)) / f.tau))
            worst_end = max(worst_end, float(np.min(np.abs(y.normals @ p.end))))
    record(3, "boundary paths from 50 refined boundary points",
           n_paths == 50 and failures == 0 and worst_depth <= 1.0 and worst_end <= 1e-6,
           f"{n_paths} paths, {failures} validation failures, max depth/tau {worst_depth:.3g}, "
           f"max endpoint offset from Y {worst_end:.2e}")


def test_4_march_paths():
    rng = np.random.default_rng(4)
    ok_paths = failures = tried = 0
    scenes = _path_scenes()
    while tried < 100:
        f, _ = scenes[tried % len(scenes)]
        x = rng.normal(size=3)
        x /= np.linalg.norm(x)
        if direction_depth(f, x).depth >= -f.tau:
            continue
        tried += 1
        try:
            p = connect_to_separators(f, x)
            validate_path(f, p)
            on_y = np.min(np.abs(separating_circles(f).normals @ p.end)) <= 1e-6
            ok_paths += bool(on_y)
            failures += not on_y
        except (TransversalError, ValidationFailed):
            failures += 1
    record(4, "paths from 100 random non-transversal starts", failures == 0 and ok_paths == 100,
           f"{ok_paths} validated paths into Y, {failures} failures")


# curve samples per interval keep the hull sampling at spacing <= 0.005
CANTOR_SAMPLES = {0: 201, 1: 68, 2: 24, 3: 9}


def test_5_cantor_clusters():
    t0 = time.perf_counter()
    grid = np.linspace(0.5, 2.5, 2001)
    counts = []
    outside = []
    for k, m in CANTOR_SAMPLES.items():
        spec = CantorSpec(k, m)
        f = cantor_family(spec)
        gap = 0.5 * spec.min_gap if k > 0 else 0.5 * CantorSpec(1).min_gap
        counts.append(count_clusters(probe_direction_curve(f, grid), curve_tolerance(f), gap))
        outside.append(probe_direction_curve(f, [2.3])[0][1] < -f.tau)
    wall = time.perf_counter() - t0
    record(5, "Cantor-stage cluster counts", counts == [1, 2, 4, 8] and all(outside) and wall < 10,
           f"clusters {counts} (expected [1, 2, 4, 8]), b=2.3 non-transversal {all(outside)}, "
           f"{wall:.1f} s")


def test_6_inflated_cantor():
    f = inflate(cantor_family(CantorSpec(2, 8)), 0.05)
    r = contractibility_report(f, level=5)
    record(6, "inflated stage-2 family at level 5", r.verdict == "PASS" and r.directed_count == 2,
           f"verdict {r.verdict}, {r.directed_count} directed components, "
           f"chi {[c.euler_characteristic for c in r.transversal.components]}")


def _convex_nonempty(P):
    v = P.vertices
    if v.shape[0] < 3 or P.area() <= 0:
        return False
    e = np.roll(v, -1, axis=0) - v
    cross = e[:, 0] * np.roll(e[:, 1], -1) - e[:, 1] * np.roll(e[:, 0], -1)
    return bool(np.all(cross > 0))


def test_7_line_space(cubes):
    rng = np.random.default_rng(7)
    # directed lines as (direction, closest point to the origin)
    lines = []
    while len(lines) < 400:
        v = rng.normal(size=3)
        v /= np.linalg.norm(v)
        P = fiber_polygon(cubes, v)
        if P is None:
            continue
        lam = rng.dirichlet(np.ones(P.vertices.shape[0]))
        q = lam @ P.vertices
        e1, e2 = orthonormal_basis(v)
        lines.append(np.concatenate([v, q[0] * e1 + q[1] * e2]))
    L = np.array(lines)
    n_clusters = int(fcluster(linkage(L, "single"), t=0.5, criterion="distance").max())
    r = contractibility_report(cubes, level=4)

    fibers_ok = True
    count = 0
    f2 = random_disjoint_family(3, 8)
    for f in (cubes, f2):
        while count < (100 if f is cubes else 200):
            v = rng.normal(size=3)
            v /= np.linalg.norm(v)
            if direction_depth(f, v).depth <= f.tau:
                continue
            P = fiber_polygon(f, v)
            fibers_ok &= P is not None and _convex_nonempty(P)
            count += 1
    record(7, "line-space clusters and fiber convexity",
           n_clusters == r.directed_count == 2 and fibers_ok,
           f"{n_clusters} line clusters vs {r.directed_count} direction components, "
           f"{count} fibers convex and nonempty: {fibers_ok}")


def _grid_oracle(polys, lo, hi, n=201, rounds=6):
    """Zooming grid search for max_q min_i clearance_i(q) (a concave function)."""
    eqs = [ConvexHull(p).equations for p in polys]
    cx = cy = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    best = -np.inf
    for _ in range(rounds):
        xs = np.linspace(cx - half, cx + half, n)
        ys = np.linspace(cy - half, cy + half, n)
        X, Y = np.meshgrid(xs, ys)
        Q = np.column_stack([X.ravel(), Y.ravel()])
        val = np.min([np.min(-(Q @ e[:, :2].T + e[:, 2]), axis=1) for e in eqs], axis=0)
        k = int(np.argmax(val))
        best = max(best, float(val[k]))
        cx, cy = Q[k]
        half *= 4.0 / (n - 1) * 2
    return best


def test_8_lp_kernel():
    rng = np.random.default_rng(8)
    errs = []
    for _ in range(10):
        polys = [rng.normal(size=(int(rng.integers(3, 12)), 2)) * rng.uniform(0.4, 1.5)
                 + rng.normal(size=2) for _ in range(int(rng.integers(2, 6)))]
        allp = np.vstack(polys)
        diam = float(np.linalg.norm(np.ptp(allp, axis=0)))
        d = common_depth([hull2d(p) for p in polys]).depth
        g = _grid_oracle(polys, allp.min() - 1.0, allp.max() + 1.0)
        errs.append(abs(d - g) / diam)
    f = random_disjoint_family(6, 8)
    dirs = rng.normal(size=(1000, 3))
    sym = float(np.max(np.abs(f.depths(dirs) - f.depths(-dirs))))
    record(8, "LP kernel against grid oracle and antipodal symmetry",
           max(errs) <= 1e-3 and sym <= 1e-9,
           f"max |LP - grid| / diameter {max(errs):.2e}, max antipodal asymmetry {sym:.1e}")


def _component_permutations(f, report, rng, per_component=12):
    mesh = report.classification.mesh
    out = []
    for comp in report.transversal.components:
        faces = rng.choice(comp.faces, size=min(per_component, comp.faces.size), replace=False)
        perms = set()
        for fi in faces:
            line = transversal_line(f, mesh.centroids[fi])
            perms.add(geometric_permutation(f, line))
        out.append(perms)
    return out


def test_9_permutations(stress_reports, cubes):
    rng = np.random.default_rng(9)
    reports, _ = stress_reports
    mixed = []
    for seed, (f, r) in zip(STRESS_SEEDS, reports):
        for i, perms in enumerate(_component_permutations(f, r, rng)):
            if len(perms) != 1:
                mixed.append((seed, i))
    rc = contractibility_report(cubes, level=4)
    cube_perms = [p.pop() for p in _component_permutations(cubes, rc, rng)]
    reversed_ok = len(cube_perms) == 2 and cube_perms[0] == cube_perms[1][::-1]
    record(9, "one geometric permutation per component", not mixed and reversed_ok,
           f"components with mixed permutations {mixed}, two-cube permutations {cube_perms}")


if __name__ == "__main__":  # pragma: no cover
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
