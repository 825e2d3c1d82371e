"""Embedded graphs: combinatorics, validation, tangents, Euler circuits."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import arcs as arcmod
from . import spaces
from .spaces import GeometryError, ModelSpace, mnorm

VALENCE_TOL_FACTOR = 1e-9  # endpoint tolerance is this times diameter(graph)
N_CHECK = 64               # sample resolution for the injectivity test


@dataclass(frozen=True)
class Arc:
    id: str
    start: str
    end: str
    geometry: object


@dataclass(frozen=True)
class GraphVertex:
    id: str
    position: np.ndarray
    incidences: tuple = ()   # of (arc id, "start" | "finish")

    @property
    def valence(self):
        return len(self.incidences)


@dataclass(frozen=True)
class Violation:
    code: str
    location: str
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple

    @property
    def ok(self):
        return not self.violations

    def codes(self):
        return [v.code for v in self.violations]


@dataclass(frozen=True)
class EulerCircuit:
    """Closed walk on the edge-doubled multigraph: each arc appears twice."""

    steps: tuple   # of (arc id, "forward" | "backward")


class EmbeddedGraph:
    """Immutable graph of parametric arcs meeting at vertices in a model space."""

    def __init__(self, space: ModelSpace, vertices, arcs, notes=None):
        self.space = space
        self.notes = tuple(notes or ())
        vmap = {}
        incid = {}
        for v in vertices:
            vid = str(v[0]) if isinstance(v, tuple) else v.id
            pos = np.asarray(v[1] if isinstance(v, tuple) else v.position, dtype=float)
            if vid in vmap:
                raise GeometryError("DUPLICATE_ID", f"vertex {vid!r} defined twice")
            vmap[vid] = pos
            incid[vid] = []
        alist = []
        for a in arcs:
            arc = Arc(str(a[0]), str(a[1]), str(a[2]), a[3]) if isinstance(a, tuple) else a
            if any(x.id == arc.id for x in alist):
                raise GeometryError("DUPLICATE_ID", f"arc {arc.id!r} defined twice")
            for end, vid in (("start", arc.start), ("finish", arc.end)):
                if vid not in vmap:
                    raise GeometryError("UNKNOWN_VERTEX", f"arc {arc.id!r} references {vid!r}")
                incid[vid].append((arc.id, end))
            alist.append(arc)
        self.arcs = tuple(alist)
        self.vertices = tuple(
            GraphVertex(vid, vmap[vid], tuple(incid[vid])) for vid in vmap
        )
        self._vmap = {v.id: v for v in self.vertices}
        self._amap = {a.id: a for a in self.arcs}
        self._paths = {}

    def vertex(self, vid):
        try:
            return self._vmap[vid]
        except KeyError:
            raise GeometryError("UNKNOWN_VERTEX", f"no vertex {vid!r}") from None

    def arc(self, aid):
        try:
            return self._amap[aid]
        except KeyError:
            raise GeometryError("UNKNOWN_ARC", f"no arc {aid!r}") from None

    def path(self, aid):
        if aid not in self._paths:
            arc = self.arc(aid)
            geo = arc.geometry
            if isinstance(geo, arcmod.Segment):
                # segments always span their vertices exactly
                geo = arcmod.Segment(self.vertex(arc.start).position,
                                     self.vertex(arc.end).position)
            self._paths[aid] = arcmod.make_path(geo, self.space)
        return self._paths[aid]

    def sample_points(self, per_arc=16):
        t = np.linspace(0.0, 1.0, per_arc)
        chunks = [self.path(a.id).pos(t) for a in self.arcs]
        chunks.append(np.array([v.position for v in self.vertices]))
        return np.concatenate(chunks, axis=0)

    def diameter(self):
        pts = self.sample_points(8)
        lo = pts.min(axis=0)
        hi = pts.max(axis=0)
        return float(np.linalg.norm(hi - lo)) or 1.0

    def components(self):
        seen = set()
        comps = []
        adj = {v.id: set() for v in self.vertices}
        for a in self.arcs:
            adj[a.start].add(a.end)
            adj[a.end].add(a.start)
        for v in self.vertices:
            if v.id in seen:
                continue
            stack, comp = [v.id], set()
            while stack:
                x = stack.pop()
                if x in comp:
                    continue
                comp.add(x)
                stack.extend(adj[x] - comp)
            seen |= comp
            comps.append(comp)
        return comps


def validate(graph: EmbeddedGraph) -> ValidationReport:
    """Check the regularity assumptions; violations are data, not failures."""
    out = []
    diam = graph.diameter()
    tol_pos = VALENCE_TOL_FACTOR * diam
    space = graph.space

    for v in graph.vertices:
        if v.valence < 2:
            out.append(Violation("VALENCE_LT_2", f"vertex {v.id}",
                                 f"valence {v.valence}"))
        defect = float(spaces.manifold_defect(space, v.position))
        if defect > spaces.ON_MANIFOLD_RTOL:
            out.append(Violation("NOT_ON_MANIFOLD", f"vertex {v.id}",
                                 f"relative defect {defect:.3e}"))

    t_check = np.linspace(0.0, 1.0, N_CHECK)
    for a in graph.arcs:
        geo = a.geometry
        if isinstance(geo, arcmod.Polyline) and np.asarray(geo.points).shape[0] < 4:
            out.append(Violation("POLYLINE_TOO_FEW_SAMPLES", f"arc {a.id}"))
            continue
        try:
            path = graph.path(a.id)
        except GeometryError as e:
            out.append(Violation(e.code, f"arc {a.id}", str(e)))
            continue
        for end, vid in (("start", a.start), ("finish", a.end)):
            anchor = path.endpoints[0 if end == "start" else 1]
            gap = float(spaces.dist(space, graph.vertex(vid).position, anchor))
            if gap > tol_pos:
                out.append(Violation("ENDPOINT_MISMATCH", f"arc {a.id} {end}",
                                     f"gap {gap:.3e} exceeds {tol_pos:.3e}"))
        speeds = path.speed(t_check)
        if np.any(speeds <= 0.0):
            out.append(Violation("ZERO_SPEED", f"arc {a.id}"))
            continue
        pts = path.pos(t_check)
        if space.curved:
            defect = spaces.manifold_defect(space, pts).max()
            if defect > 1e-6:
                out.append(Violation("NOT_ON_MANIFOLD", f"arc {a.id}",
                                     f"relative defect {defect:.3e}"))
        d = pts[:, None, :] - pts[None, :, :]
        chord = np.linalg.norm(d, axis=-1)
        gap = np.abs(t_check[:, None] - t_check[None, :])
        is_loop = a.start == a.end
        far = gap > (3.0 / N_CHECK)
        if is_loop:
            far &= (1.0 - gap) > (3.0 / N_CHECK)
        close = chord < 1e-6 * diam
        if np.any(far & close):
            out.append(Violation("ARC_NOT_INJECTIVE", f"arc {a.id}"))
    return ValidationReport(tuple(out))


def vertex_tangents(graph: EmbeddedGraph, vertex_id: str) -> np.ndarray:
    """Unit tangents at a vertex, one per incidence, pointing into each arc."""
    v = graph.vertex(vertex_id)
    out = []
    for aid, end in v.incidences:
        path = graph.path(aid)
        if end == "start":
            w = path.vel(0.0)
        else:
            w = -path.vel(1.0)
        if graph.space.curved:
            w = spaces.tangent_project(graph.space, v.position, w)
        n = mnorm(graph.space, w)
        if n <= 0:
            raise GeometryError("ZERO_SPEED", f"arc {aid} has no tangent at {end}")
        out.append(w / n)
    return np.array(out)


def doubled_euler_circuit(graph: EmbeddedGraph) -> EulerCircuit:
    """Closed circuit traversing every arc exactly twice (Hierholzer).

    Deterministic: darts are consumed in the input order of the arcs, copy 0
    before copy 1.
    """
    if not graph.vertices:
        raise GeometryError("DISCONNECTED", "empty graph")
    if len(graph.components()) != 1:
        raise GeometryError("DISCONNECTED", "graph has more than one component")

    # darts[v] = ordered (arc index, copy, direction) leaving v
    darts = {v.id: [] for v in graph.vertices}
    for i, a in enumerate(graph.arcs):
        for copy in (0, 1):
            darts[a.start].append((i, copy, "forward"))
            darts[a.end].append((i, copy, "backward"))
    for v in darts:
        darts[v].sort()
    used = set()
    cursor = {v: 0 for v in darts}

    def next_dart(v):
        lst = darts[v]
        i = cursor[v]
        while i < len(lst) and (lst[i][0], lst[i][1]) in used:
            i += 1
        cursor[v] = i
        return lst[i] if i < len(lst) else None

    start = graph.vertices[0].id
    stack = [(start, None)]
    out = []
    while stack:
        v, dart_in = stack[-1]
        d = next_dart(v)
        if d is None:
            stack.pop()
            if dart_in is not None:
                out.append(dart_in)
            continue
        i, copy, direction = d
        used.add((i, copy))
        arc = graph.arcs[i]
        nxt = arc.end if direction == "forward" else arc.start
        stack.append((nxt, (arc.id, direction)))
    out.reverse()
    if len(out) != 2 * len(graph.arcs):
        raise GeometryError("DISCONNECTED", "could not traverse every doubled edge")
    return EulerCircuit(tuple(out))
