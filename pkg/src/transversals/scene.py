"""JSON scene files and analysis reports.

Scene document, version 1::

    {
      "version": 1,
      "bodies": [
        {"label": "A", "kind": "polytope", "vertices": [[x, y, z], ...]},
        {"label": "B", "kind": "ball", "center": [x, y, z], "radius": r,
         "facets": 80}
      ],
      "tolerances": {"tau": 1e-6}
    }

``tolerances`` is optional and may carry any of ``tau``, ``tau_sep`` and
``tau_line``.  Balls are discretized on load into circumscribed polytopes
with ``facets`` facets (default 80).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

from .convex import ConvexBody, ball_polytope
from .errors import SceneError
from .family import Family

SCENE_VERSION = 1
REPORT_VERSION = 1
DEFAULT_BALL_FACETS = 80
TOLERANCE_KEYS = ("tau", "tau_sep", "tau_line")


@dataclass
class SceneFile:
    bodies: list
    tolerances: dict = field(default_factory=dict)
    version: int = SCENE_VERSION


def _num_list(x, n, what):
    if not isinstance(x, list) or len(x) != n:
        raise SceneError(f"{what} must be a list of {n} numbers")
    try:
        return [float(v) for v in x]
    except (TypeError, ValueError) as exc:
        raise SceneError(f"{what} must be numeric") from exc


def _check_body(i, b):
    if not isinstance(b, dict):
        raise SceneError(f"body {i} must be an object")
    kind = b.get("kind", "polytope")
    label = str(b.get("label", f"K{i}"))
    if kind == "polytope":
        verts = b.get("vertices")
        if not isinstance(verts, list) or not verts:
            raise SceneError(f"body {i} ({label}) needs a non-empty vertex list")
        return {"label": label, "kind": "polytope",
                "vertices": [_num_list(v, 3, f"vertex of body {i}") for v in verts]}
    if kind == "ball":
        r = b.get("radius")
        if not isinstance(r, (int, float)) or not r > 0:
            raise SceneError(f"body {i} ({label}) needs a positive radius")
        facets = b.get("facets", DEFAULT_BALL_FACETS)
        if not isinstance(facets, int) or facets < 8:
            raise SceneError(f"body {i} ({label}): facets must be an integer >= 8")
        return {"label": label, "kind": "ball",
                "center": _num_list(b.get("center"), 3, f"center of body {i}"),
                "radius": float(r), "facets": facets}
    raise SceneError(f"body {i}: unknown kind {kind!r}")


def parse_scene(text: str) -> SceneFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SceneError(f"scene is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SceneError("scene must be a JSON object")
    if doc.get("version") != SCENE_VERSION:
        raise SceneError(f"unsupported scene version {doc.get('version')!r}")
    bodies = doc.get("bodies")
    if not isinstance(bodies, list) or len(bodies) < 2:
        raise SceneError("a scene needs at least two bodies")
    tol = doc.get("tolerances", {}) or {}
    if not isinstance(tol, dict) or any(k not in TOLERANCE_KEYS for k in tol):
        raise SceneError(f"tolerances may only contain {TOLERANCE_KEYS}")
    tol = {k: float(v) for k, v in tol.items()}
    return SceneFile([_check_body(i, b) for i, b in enumerate(bodies)], tol)


def serialize_scene(scene: SceneFile) -> str:
    doc = {"version": scene.version, "bodies": scene.bodies}
    if scene.tolerances:
        doc["tolerances"] = scene.tolerances
    return json.dumps(doc, indent=1) + "\n"


def load_scene(path) -> SceneFile:
    with open(path, encoding="utf-8") as fh:
        return parse_scene(fh.read())


def scene_bodies(scene: SceneFile) -> list:
    out = []
    for b in scene.bodies:
        if b["kind"] == "ball":
            out.append(ball_polytope(b["center"], b["radius"], b["facets"], b["label"]))
        else:
            out.append(ConvexBody(b["vertices"], b["label"]))
    return out


def scene_to_family(scene: SceneFile, **overrides) -> Family:
    tol = dict(scene.tolerances)
    tol.update({k: v for k, v in overrides.items() if v is not None})
    return Family(scene_bodies(scene), **tol)


def scene_from_bodies(bodies, tolerances=None) -> SceneFile:
    out = []
    for b in bodies:
        if b.ball is not None:
            center, radius, facets = b.ball
            out.append({"label": b.label, "kind": "ball", "center": list(center),
                        "radius": radius, "facets": facets})
        else:
            out.append({"label": b.label, "kind": "polytope",
                        "vertices": b.vertices.tolist()})
    return SceneFile(out, dict(tolerances or {}))


def scene_from_family(f: Family) -> SceneFile:
    return scene_from_bodies(f.bodies)


def load_schema(name: str) -> dict:
    """Checked-in JSON schema (``"report"`` or ``"path"``)."""
    text = resources.files("transversals").joinpath(f"schemas/{name}.schema.json").read_text()
    return json.loads(text)


def analysis_report(f: Family, report, level, mode="directed", wall_time=0.0) -> dict:
    """JSON-ready report for a :class:`~transversals.sphere.ContractibilityReport`."""
    from .family import separating_circles

    body = report.to_dict()
    y = separating_circles(f)
    out = {
        "version": REPORT_VERSION,
        "mode": mode,
        "verdict": report.verdict,
        "mesh_level": int(level),
        "n_bodies": len(f),
        "directed_components": body["directed_components"],
        "undirected_components": body["undirected_components"],
        "components": body["transversal_components"],
        "complement_components": body["complement_components"],
        "complement_connected": body["complement_connected"],
        "ambiguous_fraction": body["ambiguous_fraction"],
        "antipodal_pairs": body["antipodal_pairs"],
        "separating_circles": [{"normal": n.tolist(), "pair": list(p)}
                               for n, p in zip(y.normals, y.pairs)],
        "tolerances": {"tau": f.tau, "tau_sep": f.tau_sep, "tau_line": f.tau_line},
        "wall_time": float(wall_time),
    }
    if mode == "undirected":
        # one entry per antipodal pair, represented by its lower index
        keep = sorted({min(i, j) for i, j in report.antipodal_pairs})
        out["components"] = [out["components"][i] for i in keep] or out["components"]
    return out
