"""Graph file format: JSON with ambient, vertices and arcs."""

from __future__ import annotations

import json

import numpy as np

from .arcs import CircularArc, Polyline, Segment
from .graph import EmbeddedGraph
from .spaces import GeometryError, ModelSpace, euclidean, hyperbolic, spherical


class SchemaError(ValueError):
    """Input file does not match the graph schema."""


def _require(cond, msg):
    if not cond:
        raise SchemaError(msg)


def _vec(x, dim, what):
    _require(isinstance(x, (list, tuple)) and len(x) == dim,
             f"{what} must be a list of {dim} numbers")
    try:
        out = [float(v) for v in x]
    except (TypeError, ValueError):
        raise SchemaError(f"{what} must contain finite numbers") from None
    _require(all(np.isfinite(out)), f"{what} must contain finite numbers")
    return np.array(out)


def space_from_dict(d) -> ModelSpace:
    _require(isinstance(d, dict) and "kind" in d, "ambient must carry a kind")
    kind = d["kind"]
    if kind == "euclidean":
        return euclidean()
    if kind == "hyperbolic":
        _require("kappa" in d, "hyperbolic ambient needs kappa")
        return hyperbolic(float(d["kappa"]))
    if kind == "spherical":
        _require("kappa" in d, "spherical ambient needs kappa")
        return spherical(float(d["kappa"]))
    raise SchemaError(f"unknown ambient kind {kind!r}")


def space_to_dict(space: ModelSpace) -> dict:
    if not space.curved:
        return {"kind": "euclidean"}
    return {"kind": space.kind, "kappa": space.kappa}


def geometry_from_dict(d, dim):
    _require(isinstance(d, dict) and "kind" in d, "geometry must carry a kind")
    kind = d["kind"]
    if kind == "segment":
        return None  # endpoints come from the arc's vertices
    if kind == "circular":
        for key in ("center", "normal", "radius", "angle0", "angle1"):
            _require(key in d, f"circular geometry needs {key!r}")
        return CircularArc(_vec(d["center"], dim, "center"),
                           _vec(d["normal"], dim, "normal"),
                           float(d["radius"]), float(d["angle0"]), float(d["angle1"]))
    if kind == "polyline":
        _require("points" in d and isinstance(d["points"], list),
                 "polyline geometry needs a points list")
        pts = [_vec(p, dim, "polyline point") for p in d["points"]]
        _require(len(pts) >= 4, "polyline needs at least 4 samples")
        return Polyline(np.array(pts))
    raise SchemaError(f"unknown geometry kind {kind!r}")


def geometry_to_dict(geo):
    if isinstance(geo, Segment):
        return {"kind": "segment"}
    if isinstance(geo, CircularArc):
        return {"kind": "circular", "center": list(map(float, geo.center)),
                "normal": list(map(float, geo.normal)), "radius": float(geo.radius),
                "angle0": float(geo.angle0), "angle1": float(geo.angle1)}
    if isinstance(geo, Polyline):
        return {"kind": "polyline",
                "points": [list(map(float, p)) for p in np.asarray(geo.points)]}
    raise SchemaError(f"cannot serialize geometry {type(geo).__name__}")


def graph_from_dict(data) -> EmbeddedGraph:
    _require(isinstance(data, dict), "top level must be an object")
    for key in ("ambient", "vertices", "arcs"):
        _require(key in data, f"missing top-level key {key!r}")
    space = space_from_dict(data["ambient"])
    dim = space.dim
    positions = {}
    verts = []
    for v in data["vertices"]:
        _require(isinstance(v, dict) and "id" in v and "pos" in v,
                 "each vertex needs id and pos")
        pos = _vec(v["pos"], dim, f"vertex {v['id']} pos")
        positions[str(v["id"])] = pos
        verts.append((str(v["id"]), pos))
    arcs = []
    for a in data["arcs"]:
        _require(isinstance(a, dict), "each arc must be an object")
        for key in ("id", "from", "to", "geometry"):
            _require(key in a, f"arc needs key {key!r}")
        geo = geometry_from_dict(a["geometry"], dim)
        if geo is None:
            _require(a["from"] in positions and a["to"] in positions,
                     f"arc {a['id']} references unknown vertices")
            geo = Segment(positions[a["from"]], positions[a["to"]])
        arcs.append((str(a["id"]), str(a["from"]), str(a["to"]), geo))
    notes = data.get("notes", [])
    _require(isinstance(notes, list), "notes must be a list of strings")
    try:
        return EmbeddedGraph(space, verts, arcs, notes=[str(n) for n in notes])
    except GeometryError as e:
        raise SchemaError(str(e)) from None


def graph_to_dict(graph: EmbeddedGraph) -> dict:
    out = {
        "ambient": space_to_dict(graph.space),
        "vertices": [{"id": v.id, "pos": list(map(float, v.position))}
                     for v in graph.vertices],
        "arcs": [{"id": a.id, "from": a.start, "to": a.end,
                  "geometry": geometry_to_dict(a.geometry)}
                 for a in graph.arcs],
    }
    if graph.notes:
        out["notes"] = list(graph.notes)
    return out


def load_graph(path) -> EmbeddedGraph:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as e:
        raise SchemaError(f"not valid JSON: {e}") from None
    return graph_from_dict(data)


def save_graph(graph: EmbeddedGraph, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(graph_to_dict(graph), fh, indent=2)
        fh.write("\n")
