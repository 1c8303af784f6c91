"""Rasterized topology of transversal directions on a geodesic sphere.

Faces of a subdivided icosahedron are labelled by the signed depth at their
centroid direction.  Connected components are taken over shared edges and
each component's Euler characteristic is computed on its closed
subcomplex, so that ``connected and chi == 1`` certifies a disk.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from .errors import Inconclusive, LevelOutOfRange
from .family import (AMBIGUOUS, LABEL_NAMES, NON_TRANSVERSAL, TRANSVERSAL, Family,
                     separating_circles)

MAX_LEVEL = 9

PASS = "PASS"
FAIL = "FAIL"
INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True, eq=False)
class SphereMesh:
    level: int
    vertices: np.ndarray
    faces: np.ndarray
    edges: np.ndarray
    face_edges: np.ndarray
    edge_faces: np.ndarray
    antipode_vertex: np.ndarray
    antipode_face: np.ndarray
    centroids: np.ndarray

    @property
    def n_faces(self) -> int:
        return self.faces.shape[0]

    def euler_characteristic(self) -> int:
        return self.vertices.shape[0] - self.edges.shape[0] + self.faces.shape[0]


def _icosahedron():
    t = (1.0 + np.sqrt(5.0)) / 2.0
    v = np.array([
        [-1, t, 0], [1, t, 0], [-1, -t, 0], [1, -t, 0],
        [0, -1, t], [0, 1, t], [0, -1, -t], [0, 1, -t],
        [t, 0, -1], [t, 0, 1], [-t, 0, -1], [-t, 0, 1],
    ], dtype=float)
    f = np.array([
        [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
        [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
        [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
        [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
    ], dtype=np.int64)
    return v / np.linalg.norm(v, axis=1)[:, None], f


def _edges(faces):
    e = np.concatenate([faces[:, [0, 1]], faces[:, [1, 2]], faces[:, [2, 0]]])
    e.sort(axis=1)
    uniq, inv = np.unique(e, axis=0, return_inverse=True)
    nf = faces.shape[0]
    face_edges = inv.reshape(3, nf).T
    return uniq, face_edges


def _subdivide(v, f):
    edges, fe = _edges(f)
    mid = v[edges[:, 0]] + v[edges[:, 1]]
    mid /= np.linalg.norm(mid, axis=1)[:, None]
    nv = v.shape[0]
    m01, m12, m20 = fe[:, 0] + nv, fe[:, 1] + nv, fe[:, 2] + nv
    a, b, c = f[:, 0], f[:, 1], f[:, 2]
    nf = np.concatenate([
        np.column_stack([a, m01, m20]),
        np.column_stack([m01, b, m12]),
        np.column_stack([m20, m12, c]),
        np.column_stack([m01, m12, m20]),
    ])
    return np.vstack([v, mid]), nf


@lru_cache(maxsize=8)
def build_mesh(level: int) -> SphereMesh:
    """Icosahedron subdivided ``level`` times (``20 * 4**level`` faces)."""
    if not isinstance(level, (int, np.integer)) or not 0 <= level <= MAX_LEVEL:
        raise LevelOutOfRange(f"mesh level must be in [0, {MAX_LEVEL}], got {level!r}")
    v, f = _icosahedron()
    for _ in range(level):
        v, f = _subdivide(v, f)
    edges, face_edges = _edges(f)
    ne = edges.shape[0]
    edge_faces = np.full((ne, 2), -1, dtype=np.int64)
    flat = face_edges.ravel()
    owner = np.repeat(np.arange(f.shape[0]), 3)
    order = np.argsort(flat, kind="stable")
    edge_faces[:, 0] = owner[order[0::2]]
    edge_faces[:, 1] = owner[order[1::2]]

    cent = v[f].sum(axis=1)
    cent /= np.linalg.norm(cent, axis=1)[:, None]
    dist_v, ant_v = cKDTree(v).query(-v)
    dist_f, ant_f = cKDTree(cent).query(-cent)
    assert dist_v.max() < 1e-9 and dist_f.max() < 1e-9, "mesh lost central symmetry"
    for arr in (v, f, edges, face_edges, edge_faces, ant_v, ant_f, cent):
        arr.setflags(write=False)
    return SphereMesh(level, v, f, edges, face_edges, edge_faces, ant_v, ant_f, cent)


@dataclass(frozen=True, eq=False)
class SphereClassification:
    mesh: SphereMesh
    labels: np.ndarray
    depths: np.ndarray
    tau: float

    @property
    def ambiguous_fraction(self) -> float:
        return float(np.mean(self.labels == AMBIGUOUS))


def classify(f: Family, mesh: SphereMesh) -> SphereClassification:
    """Depth at every face centroid (LP seed = face index) and its label."""
    depths = f.depths(mesh.centroids, seeds=np.arange(mesh.n_faces, dtype=np.int64))
    return SphereClassification(mesh, f.label_of(depths), depths, f.tau)


@dataclass
class Component:
    faces: np.ndarray
    label: int
    euler_characteristic: int
    is_disk: bool
    contains_antipode_of: int | None = None

    def to_dict(self):
        return {
            "n_faces": int(self.faces.size),
            "label": LABEL_NAMES[self.label],
            "euler_characteristic": int(self.euler_characteristic),
            "is_disk": bool(self.is_disk),
            "contains_antipode_of": self.contains_antipode_of,
        }


@dataclass
class ComponentReport:
    components: list
    face_component: np.ndarray = field(repr=False)

    def __len__(self):
        return len(self.components)

    @property
    def euler_characteristics(self):
        return [c.euler_characteristic for c in self.components]


def closed_euler_characteristic(mesh: SphereMesh, faces) -> int:
    """V - E + F of the closed subcomplex spanned by ``faces``."""
    faces = np.asarray(faces)
    if faces.size == 0:
        return 0
    nv = np.unique(mesh.faces[faces].ravel()).size
    ne = np.unique(mesh.face_edges[faces].ravel()).size
    return int(nv - ne + faces.size)


def _face_components(mesh: SphereMesh, mask):
    ef = mesh.edge_faces
    both = mask[ef[:, 0]] & mask[ef[:, 1]]
    a, b = ef[both, 0], ef[both, 1]
    n = mesh.n_faces
    g = coo_matrix((np.ones(a.size), (a, b)), shape=(n, n))
    _, lab = connected_components(g, directed=False)
    lab = np.where(mask, lab, -1)
    # renumber by smallest face index for determinism
    sel = np.flatnonzero(mask)
    uniq, first = np.unique(lab[sel], return_index=True)
    order = np.argsort(sel[first])
    remap = np.full(lab.max() + 2 if lab.size else 1, -1)
    remap[uniq[order]] = np.arange(uniq.size)
    out = np.full(n, -1, dtype=np.int64)
    out[sel] = remap[lab[sel]]
    return out, uniq.size


def components(c: SphereClassification, label, mask=None) -> ComponentReport:
    """Edge-connected components of the faces carrying ``label``.

    ``label`` may be a single label or a collection of labels (e.g. the
    non-transversal side together with the ambiguous buffer).  Antipodal
    partners are filled in when the antipode of every face of a component
    lies in a single component of the same report.
    """
    mesh = c.mesh
    if mask is None:
        labels = np.atleast_1d(label)
        mask = np.isin(c.labels, labels)
    comp_of, k = _face_components(mesh, mask)
    comps = []
    tag = int(np.atleast_1d(label)[0])
    for i in range(k):
        faces = np.flatnonzero(comp_of == i)
        chi = closed_euler_characteristic(mesh, faces)
        comps.append(Component(faces, tag, chi, chi == 1))
    for i, comp in enumerate(comps):
        partners = np.unique(comp_of[mesh.antipode_face[comp.faces]])
        if partners.size == 1 and partners[0] >= 0:
            comp.contains_antipode_of = int(partners[0])
    return ComponentReport(comps, comp_of)


def complement_connected(c: SphereClassification) -> bool:
    """Whether the non-transversal and ambiguous faces form one component.

    An empty complement is reported as ``False`` (degenerate input).
    """
    mask = c.labels != TRANSVERSAL
    if not mask.any():
        return False
    _, k = _face_components(c.mesh, mask)
    return k == 1


@dataclass
class ContractibilityReport:
    verdict: str
    transversal: ComponentReport
    complement: ComponentReport
    complement_connected: bool
    ambiguous_fraction: float
    antipodal_pairs: list
    undirected_count: int
    classification: SphereClassification = field(repr=False)
    degenerate: bool = False
    separating_circles: object = field(default=None, repr=False)

    @property
    def directed_count(self) -> int:
        return len(self.transversal)

    def to_dict(self):
        return {
            "verdict": self.verdict,
            "directed_components": self.directed_count,
            "undirected_components": self.undirected_count,
            "transversal_components": [c.to_dict() for c in self.transversal.components],
            "complement_components": [c.to_dict() for c in self.complement.components],
            "complement_connected": bool(self.complement_connected),
            "ambiguous_fraction": float(self.ambiguous_fraction),
            "antipodal_pairs": [list(p) for p in self.antipodal_pairs],
            "degenerate": bool(self.degenerate),
        }


def antipodal_pairs(report: ComponentReport):
    """Pairs ``(i, j)``, ``i <= j``, of components swapped by ``x -> -x``."""
    pairs = set()
    for i, comp in enumerate(report.components):
        j = comp.contains_antipode_of
        if j is None:
            continue
        pairs.add((min(i, j), max(i, j)))
    return sorted(pairs)


def contractibility_report(f: Family, level=4, ambiguous_limit=0.02,
                           ambiguous_as_transversal=False,
                           raise_inconclusive=True) -> ContractibilityReport:
    """Check that every transversal component is a disk.

    The verdict is ``PASS`` when the non-transversal side is connected and
    every transversal component is connected with ``chi == 1``.  Directed
    components are expected to come in antipodal pairs, never self-paired;
    the undirected count is the number of such pairs.

    Raises :class:`Inconclusive` (with the report attached) when more than
    ``ambiguous_limit`` of the faces are ambiguous, unless
    ``raise_inconclusive`` is false, in which case the verdict is
    ``INCONCLUSIVE``.
    """
    mesh = build_mesh(level)
    cls = classify(f, mesh)
    if ambiguous_as_transversal:
        t_mask = cls.labels != NON_TRANSVERSAL
    else:
        t_mask = cls.labels == TRANSVERSAL
    trans = components(cls, TRANSVERSAL, mask=t_mask)
    comp = components(cls, NON_TRANSVERSAL, mask=~t_mask)
    connected = len(comp) == 1
    degenerate = len(comp) == 0
    pairs = antipodal_pairs(trans)
    self_paired = any(i == j for i, j in pairs)
    all_paired = all(c.contains_antipode_of is not None for c in trans.components)
    undirected = len(pairs) if (all_paired and not self_paired) else len(trans)
    ok = (connected and all(c.is_disk for c in trans.components)
          and all_paired and not self_paired)
    report = ContractibilityReport(
        PASS if ok else FAIL, trans, comp, connected, cls.ambiguous_fraction,
        pairs, undirected, cls, degenerate, separating_circles(f))
    if cls.ambiguous_fraction > ambiguous_limit:
        report.verdict = INCONCLUSIVE
        if raise_inconclusive:
            raise Inconclusive(
                f"{cls.ambiguous_fraction:.1%} of faces are ambiguous; refine the mesh",
                report)
    return report
