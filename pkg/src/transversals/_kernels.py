"""Compiled inner loops: planar hulls, halfplane encodings and a seeded
randomized incremental LP (Seidel) for 1 to 4 variables.

Everything here works on plain float64 arrays so it can be called from
``numba.prange`` loops.  The public wrappers live in :mod:`convex`.
"""
import numpy as np
from numba import config, njit, prange

# the bundled TBB is too old; skip the probe (and its warning)
config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]

LP_OK = 0
LP_INFEASIBLE = 1

_TINY = 1e-13


# ---------------------------------------------------------------------------
# deterministic permutation
# ---------------------------------------------------------------------------

@njit(cache=True)
def _splitmix(state):
    z = (state + np.uint64(0x9E3779B97F4A7C15)) & np.uint64(0xFFFFFFFFFFFFFFFF)
    state = z
    z = ((z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)) & np.uint64(0xFFFFFFFFFFFFFFFF)
    z = ((z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)) & np.uint64(0xFFFFFFFFFFFFFFFF)
    z = z ^ (z >> np.uint64(31))
    return state, z


@njit(cache=True)
def permutation(m, seed):
    perm = np.arange(m)
    state = np.uint64(seed)
    for i in range(m - 1, 0, -1):
        state, r = _splitmix(state)
        j = np.int64(r % np.uint64(i + 1))
        tmp = perm[i]
        perm[i] = perm[j]
        perm[j] = tmp
    return perm


# ---------------------------------------------------------------------------
# Seidel LP:  maximize c.x  s.t.  A x <= b,  lo <= x <= hi
# ---------------------------------------------------------------------------

@njit(cache=True)
def _box_corner(c, lo, hi):
    x = np.empty(c.shape[0])
    for j in range(c.shape[0]):
        if c[j] < 0.0:
            x[j] = lo[j]
        else:
            x[j] = hi[j]
    return x


@njit(cache=True)
def _reduce(A, b, c, lo, hi, rows, nrows, a, beta):
    """Eliminate one variable using the equality ``a.x = beta``.

    Returns the reduced problem over the remaining variables together with
    the back-substitution ``x_k = r0 + r.x'``.
    """
    d = a.shape[0]
    k = 0
    for j in range(1, d):
        if abs(a[j]) > abs(a[k]):
            k = j
    r = np.empty(d - 1)
    keep = np.empty(d - 1, dtype=np.int64)
    p = 0
    for j in range(d):
        if j != k:
            keep[p] = j
            r[p] = -a[j] / a[k]
            p += 1
    r0 = beta / a[k]

    A2 = np.empty((nrows + 2, d - 1))
    b2 = np.empty(nrows + 2)
    # box of the eliminated variable first
    for p in range(d - 1):
        A2[0, p] = r[p]
        A2[1, p] = -r[p]
    b2[0] = hi[k] - r0
    b2[1] = r0 - lo[k]
    for s in range(nrows):
        i = rows[s]
        g = A[i]
        for p in range(d - 1):
            A2[s + 2, p] = g[keep[p]] + g[k] * r[p]
        b2[s + 2] = b[i] - g[k] * r0
    c2 = np.empty(d - 1)
    lo2 = np.empty(d - 1)
    hi2 = np.empty(d - 1)
    for p in range(d - 1):
        c2[p] = c[keep[p]] + c[k] * r[p]
        lo2[p] = lo[keep[p]]
        hi2[p] = hi[keep[p]]
    return A2, b2, c2, lo2, hi2, k, keep, r, r0


@njit(cache=True)
def _expand(xr, k, keep, r, r0):
    d = xr.shape[0] + 1
    x = np.empty(d)
    xk = r0
    for p in range(d - 1):
        x[keep[p]] = xr[p]
        xk += r[p] * xr[p]
    x[k] = xk
    return x


@njit(cache=True)
def _lp1(A, b, c, lo, hi, eps):
    L = lo[0]
    U = hi[0]
    for i in range(A.shape[0]):
        a = A[i, 0]
        if a > _TINY:
            v = b[i] / a
            if v < U:
                U = v
        elif a < -_TINY:
            v = b[i] / a
            if v > L:
                L = v
        elif b[i] < -eps:
            return LP_INFEASIBLE, np.zeros(1)
    x = np.empty(1)
    if L > U:
        if L - U > eps:
            return LP_INFEASIBLE, x
        x[0] = 0.5 * (L + U)
    elif c[0] < 0.0:
        x[0] = L
    else:
        x[0] = U
    return LP_OK, x


@njit(cache=True)
def _violated(A, b, i, x, eps):
    s = 0.0
    for j in range(x.shape[0]):
        s += A[i, j] * x[j]
    return s > b[i] + eps


@njit(cache=True)
def _lp2(A, b, c, lo, hi, eps):
    x = _box_corner(c, lo, hi)
    m = A.shape[0]
    rows = np.arange(m)
    for s in range(m):
        if not _violated(A, b, s, x, eps):
            continue
        a = A[s]
        if abs(a[0]) + abs(a[1]) <= _TINY:
            return LP_INFEASIBLE, x
        A2, b2, c2, lo2, hi2, k, keep, r, r0 = _reduce(A, b, c, lo, hi, rows, s, a, b[s])
        st, xr = _lp1(A2, b2, c2, lo2, hi2, eps)
        if st != LP_OK:
            return st, x
        x = _expand(xr, k, keep, r, r0)
    return LP_OK, x


@njit(cache=True)
def _lp3(A, b, c, lo, hi, eps):
    x = _box_corner(c, lo, hi)
    m = A.shape[0]
    rows = np.arange(m)
    for s in range(m):
        if not _violated(A, b, s, x, eps):
            continue
        a = A[s]
        if abs(a[0]) + abs(a[1]) + abs(a[2]) <= _TINY:
            return LP_INFEASIBLE, x
        A2, b2, c2, lo2, hi2, k, keep, r, r0 = _reduce(A, b, c, lo, hi, rows, s, a, b[s])
        st, xr = _lp2(A2, b2, c2, lo2, hi2, eps)
        if st != LP_OK:
            return st, x
        x = _expand(xr, k, keep, r, r0)
    return LP_OK, x


@njit(cache=True)
def _lp4(A, b, c, lo, hi, eps):
    x = _box_corner(c, lo, hi)
    m = A.shape[0]
    rows = np.arange(m)
    for s in range(m):
        if not _violated(A, b, s, x, eps):
            continue
        a = A[s]
        if abs(a[0]) + abs(a[1]) + abs(a[2]) + abs(a[3]) <= _TINY:
            return LP_INFEASIBLE, x
        A2, b2, c2, lo2, hi2, k, keep, r, r0 = _reduce(A, b, c, lo, hi, rows, s, a, b[s])
        st, xr = _lp3(A2, b2, c2, lo2, hi2, eps)
        if st != LP_OK:
            return st, x
        x = _expand(xr, k, keep, r, r0)
    return LP_OK, x


@njit(cache=True)
def seidel_lp(A, b, c, lo, hi, seed, eps):
    """Solve ``max c.x, A x <= b, lo <= x <= hi`` for 1 to 4 variables.

    Constraints are visited in a permutation drawn from ``seed``.  Returns
    ``(status, x)``.
    """
    m = A.shape[0]
    d = A.shape[1]
    perm = permutation(m, seed)
    Ap = np.empty((m, d))
    bp = np.empty(m)
    for i in range(m):
        Ap[i] = A[perm[i]]
        bp[i] = b[perm[i]]
    if d == 1:
        return _lp1(Ap, bp, c, lo, hi, eps)
    if d == 2:
        return _lp2(Ap, bp, c, lo, hi, eps)
    if d == 3:
        return _lp3(Ap, bp, c, lo, hi, eps)
    return _lp4(Ap, bp, c, lo, hi, eps)


# ---------------------------------------------------------------------------
# planar geometry
# ---------------------------------------------------------------------------

@njit(cache=True)
def orthonormal_basis(v):
    """Right-handed (e1, e2) with e1 x e2 = v; antipodes get (e2, e1)."""
    x, y, z = v[0], v[1], v[2]
    flip = not (z > 0.0 or (z == 0.0 and (y > 0.0 or (y == 0.0 and x > 0.0))))
    if flip:
        x, y, z = -x, -y, -z
    a = -1.0 / (1.0 + z)
    bb = x * y * a
    e1 = np.array([1.0 + x * x * a, bb, -x])
    e2 = np.array([bb, 1.0 + y * y * a, -y])
    if flip:
        return e2, e1
    return e1, e2


@njit(cache=True)
def hull2d(pts):
    """Counterclockwise convex hull (Andrew's monotone chain).

    Collinear points are dropped.  Degenerate inputs return one or two
    points.
    """
    n = pts.shape[0]
    o1 = np.argsort(pts[:, 1], kind="mergesort")
    o2 = np.argsort(pts[o1, 0], kind="mergesort")
    order = o1[o2]
    P = pts[order]
    ext = 0.0
    for i in range(n):
        for j in range(2):
            a = abs(P[i, j] - P[0, j])
            if a > ext:
                ext = a
    if ext == 0.0:
        return P[:1].copy()
    tol = 1e-13 * ext * ext
    H = np.empty((2 * n + 1, 2))
    k = 0
    for i in range(n):
        while k >= 2 and ((H[k - 1, 0] - H[k - 2, 0]) * (P[i, 1] - H[k - 2, 1])
                          - (H[k - 1, 1] - H[k - 2, 1]) * (P[i, 0] - H[k - 2, 0])) <= tol:
            k -= 1
        H[k] = P[i]
        k += 1
    t = k + 1
    for i in range(n - 2, -1, -1):
        while k >= t and ((H[k - 1, 0] - H[k - 2, 0]) * (P[i, 1] - H[k - 2, 1])
                          - (H[k - 1, 1] - H[k - 2, 1]) * (P[i, 0] - H[k - 2, 0])) <= tol:
            k -= 1
        H[k] = P[i]
        k += 1
    k -= 1
    if k < 1:
        k = 1
    if k == 2:
        d0 = abs(H[1, 0] - H[0, 0]) + abs(H[1, 1] - H[0, 1])
        if d0 <= 1e-15 * ext:
            k = 1
    return H[:k].copy()


@njit(cache=True)
def halfplanes(H, out_a, out_b, start):
    """Write outward unit normals and offsets describing hull ``H``.

    Segments become two opposite zero-width halfplanes plus two end caps;
    points become four axis halfplanes.  Returns the next free row.
    """
    k = H.shape[0]
    r = start
    if k == 2 and H[0, 0] == H[1, 0] and H[0, 1] == H[1, 1]:
        k = 1
    if k == 1:
        px, py = H[0, 0], H[0, 1]
        out_a[r, 0], out_a[r, 1], out_b[r] = 1.0, 0.0, px
        out_a[r + 1, 0], out_a[r + 1, 1], out_b[r + 1] = -1.0, 0.0, -px
        out_a[r + 2, 0], out_a[r + 2, 1], out_b[r + 2] = 0.0, 1.0, py
        out_a[r + 3, 0], out_a[r + 3, 1], out_b[r + 3] = 0.0, -1.0, -py
        return r + 4
    if k == 2:
        dx = H[1, 0] - H[0, 0]
        dy = H[1, 1] - H[0, 1]
        ln = np.sqrt(dx * dx + dy * dy)
        dx /= ln
        dy /= ln
        nx, ny = dy, -dx
        off = nx * H[0, 0] + ny * H[0, 1]
        out_a[r, 0], out_a[r, 1], out_b[r] = nx, ny, off
        out_a[r + 1, 0], out_a[r + 1, 1], out_b[r + 1] = -nx, -ny, -off
        out_a[r + 2, 0], out_a[r + 2, 1], out_b[r + 2] = dx, dy, dx * H[1, 0] + dy * H[1, 1]
        out_a[r + 3, 0], out_a[r + 3, 1], out_b[r + 3] = -dx, -dy, -(dx * H[0, 0] + dy * H[0, 1])
        return r + 4
    for i in range(k):
        j = i + 1
        if j == k:
            j = 0
        dx = H[j, 0] - H[i, 0]
        dy = H[j, 1] - H[i, 1]
        ln = np.sqrt(dx * dx + dy * dy)
        nx = dy / ln
        ny = -dx / ln
        out_a[r, 0] = nx
        out_a[r, 1] = ny
        out_b[r] = nx * H[i, 0] + ny * H[i, 1]
        r += 1
    return r


@njit(cache=True)
def max_clearance(ha, hb, m, box, seed, eps):
    """Maximize t subject to ``a.q + t <= b`` for the first ``m`` rows.

    ``q`` is confined to ``[-box, box]^2``.  Returns ``(t, qx, qy)``.
    """
    inv = 1.0 / np.sqrt(2.0)
    A = np.empty((m, 3))
    bb = np.empty(m)
    bmax = 0.0
    for i in range(m):
        A[i, 0] = ha[i, 0] * inv
        A[i, 1] = ha[i, 1] * inv
        A[i, 2] = inv
        bb[i] = hb[i] * inv
        if abs(hb[i]) > bmax:
            bmax = abs(hb[i])
    tbox = 2.0 * (np.sqrt(2.0) * box + bmax) + 1.0
    lo = np.array([-box, -box, -tbox])
    hi = np.array([box, box, tbox])
    c = np.array([0.0, 0.0, 1.0])
    st, x = seidel_lp(A, bb, c, lo, hi, seed, eps)
    return x[2], x[0], x[1]


@njit(cache=True)
def _project(verts, lo, hi, e1, e2, center):
    n = hi - lo
    P = np.empty((n, 2))
    for i in range(n):
        px = verts[lo + i, 0] - center[0]
        py = verts[lo + i, 1] - center[1]
        pz = verts[lo + i, 2] - center[2]
        P[i, 0] = px * e1[0] + py * e1[1] + pz * e1[2]
        P[i, 1] = px * e2[0] + py * e2[1] + pz * e2[2]
    return P


@njit(cache=True)
def direction_depth_one(verts, ptr, v, center, box, seed, eps):
    nb = ptr.shape[0] - 1
    e1, e2 = orthonormal_basis(v)
    cap = 0
    for i in range(nb):
        cap += max(ptr[i + 1] - ptr[i], 4)
    ha = np.empty((cap, 2))
    hb = np.empty(cap)
    r = 0
    for i in range(nb):
        P = _project(verts, ptr[i], ptr[i + 1], e1, e2, center)
        H = hull2d(P)
        r = halfplanes(H, ha, hb, r)
    return max_clearance(ha, hb, r, box, seed, eps)


@njit(cache=True, parallel=True)
def direction_depths(verts, ptr, dirs, center, box, seeds, eps):
    m = dirs.shape[0]
    out = np.empty((m, 3))
    for f in prange(m):
        t, qx, qy = direction_depth_one(verts, ptr, dirs[f], center, box, seeds[f], eps)
        out[f, 0] = t
        out[f, 1] = qx
        out[f, 2] = qy
    return out
