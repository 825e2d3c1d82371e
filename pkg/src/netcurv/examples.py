"""Built-in graph corpus: the reference configurations used throughout the tests."""

from __future__ import annotations

import math

import numpy as np

from .arcs import CircularArc, Polyline, Segment, arc_from_endpoints
from .graph import EmbeddedGraph
from .spaces import GeometryError, euclidean

ELEVEN_OVAL_NOTE = (
    "this eleven-oval net is sometimes quoted with total curvature 44*pi; "
    "evaluating the definition directly gives 22*pi (each oval contributes "
    "2*pi and every crossing vertex contributes 0); the computed value is "
    "reported unchanged"
)


def _unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


def great_circle():
    """Unit circle in the z = 0 plane split into four quarter arcs."""
    zhat = np.array([0.0, 0.0, 1.0])
    verts = [("v0", (1, 0, 0)), ("v1", (0, 1, 0)), ("v2", (-1, 0, 0)), ("v3", (0, -1, 0))]
    arcs = []
    for i in range(4):
        a0 = i * math.pi / 2
        arcs.append((f"a{i}", f"v{i}", f"v{(i + 1) % 4}",
                     CircularArc(np.zeros(3), zhat, 1.0, a0, a0 + math.pi / 2)))
    return EmbeddedGraph(euclidean(), verts, arcs)


def y_graph():
    """Three unit semicircles joining the poles in half-planes 2*pi/3 apart."""
    north = np.array([0.0, 0.0, 1.0])
    south = -north
    verts = [("n", north), ("s", south)]
    arcs = []
    for ell in range(3):
        phi = 2 * math.pi * ell / 3
        d = np.array([math.cos(phi), math.sin(phi), 0.0])
        normal = _unit(np.cross(d, north))
        geo = arc_from_endpoints(euclidean(), np.zeros(3), normal, 1.0, south, north,
                                 via=d)
        arcs.append((f"a{ell}", "s", "n", geo))
    return EmbeddedGraph(euclidean(), verts, arcs)


def tetrahedron():
    """Skeleton of the regular tetrahedron inscribed in the unit sphere."""
    pts = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float)
    pts /= math.sqrt(3.0)
    verts = [(f"v{i}", pts[i]) for i in range(4)]
    arcs = []
    n = 0
    for i in range(4):
        for j in range(i + 1, 4):
            arcs.append((f"e{n}", f"v{i}", f"v{j}", Segment(pts[i], pts[j])))
            n += 1
    return EmbeddedGraph(euclidean(), verts, arcs)


def cube():
    """Skeleton of the cube inscribed in the unit sphere."""
    pts = np.array([[x, y, z] for x in (-1, 1) for y in (-1, 1) for z in (-1, 1)],
                   dtype=float) / math.sqrt(3.0)
    verts = [(f"v{i}", pts[i]) for i in range(8)]
    arcs = []
    n = 0
    for i in range(8):
        for j in range(i + 1, 8):
            if np.sum(np.abs(pts[i] - pts[j]) > 1e-12) == 1:
                arcs.append((f"e{n}", f"v{i}", f"v{j}", Segment(pts[i], pts[j])))
                n += 1
    return EmbeddedGraph(euclidean(), verts, arcs)


def football(alpha_plus, alpha_minus=None, height=1.0):
    """Three congruent convex arcs joining two poles in half-planes 2*pi/3 apart.

    Each arc meets the axis at angle alpha_minus at the lower pole and
    alpha_plus at the upper pole, so its unsigned curvature integral equals
    alpha_plus + alpha_minus.  Symmetric angles give a single circular arc per
    half-plane; asymmetric angles use two circular arcs joined smoothly at an
    interior valence-2 vertex.
    """
    if alpha_minus is None:
        alpha_minus = alpha_plus
    ap, am = float(alpha_plus), float(alpha_minus)
    if not (0.0 < ap < math.pi / 2 and 0.0 < am < math.pi / 2):
        raise GeometryError("BAD_PARAMS", "football angles must lie in (0, pi/2)")
    h = float(height)
    q_minus = np.array([0.0, 0.0, -h])
    q_plus = np.array([0.0, 0.0, h])
    verts = [("q-", q_minus), ("q+", q_plus)]
    arcs = []
    symmetric = abs(ap - am) < 1e-14
    for ell in range(3):
        phi = 2 * math.pi * ell / 3
        d = np.array([math.cos(phi), math.sin(phi), 0.0])
        zhat = np.array([0.0, 0.0, 1.0])
        normal = _unit(np.cross(d, zhat))
        if symmetric:
            # circle through both poles meeting the axis at angle alpha
            rho = h / math.sin(ap)
            center = -d * rho * math.cos(ap)
            geo = arc_from_endpoints(euclidean(), center, normal, rho, q_minus, q_plus)
            arcs.append((f"a{ell}", "q-", "q+", geo))
        else:
            # two tangent circles, joined where the tangent is parallel to the axis
            lam = 2.0 * h / (math.sin(am) * (1 - math.cos(ap)) +
                             math.sin(ap) * (1 - math.cos(am)))
            r1 = lam * (1 - math.cos(ap))
            r2 = lam * (1 - math.cos(am))
            join = q_minus + d * r1 * (1 - math.cos(am)) + zhat * r1 * math.sin(am)
            c1 = _biarc_center(q_minus, d, zhat, am, r1)
            c2 = _biarc_center_upper(q_plus, d, zhat, ap, r2)
            vid = f"m{ell}"
            verts.append((vid, join))
            arcs.append((f"a{ell}l", "q-", vid,
                         arc_from_endpoints(euclidean(), c1, normal, r1, q_minus, join)))
            arcs.append((f"a{ell}u", vid, "q+",
                         arc_from_endpoints(euclidean(), c2, normal, r2, join, q_plus)))
    return EmbeddedGraph(euclidean(), verts, arcs)


def _biarc_center(q, d, zhat, alpha, r):
    """Center of the lower biarc piece: the circle through q whose tangent
    there makes angle alpha with the axis and which curves toward the axis."""
    inward = -d * math.cos(alpha) + zhat * math.sin(alpha)   # 90 deg left of tangent
    return q + r * inward


def _biarc_center_upper(q, d, zhat, alpha, r):
    inward = -d * math.cos(alpha) - zhat * math.sin(alpha)
    return q + r * inward


def theta_graph():
    """Two trivalent vertices joined by a segment and two half circles."""
    a = np.array([1.0, 0.0, 0.0])
    b = np.array([-1.0, 0.0, 0.0])
    verts = [("q0", a), ("q1", b)]
    zhat = np.array([0.0, 0.0, 1.0])
    yhat = np.array([0.0, 1.0, 0.0])
    arcs = [
        ("a0", "q0", "q1", Segment(a, b)),
        ("a1", "q0", "q1", CircularArc(np.zeros(3), zhat, 1.0, 0.0, math.pi)),
        ("a2", "q0", "q1", CircularArc(np.zeros(3), -yhat, 1.0, 0.0, math.pi)),
    ]
    return EmbeddedGraph(euclidean(), verts, arcs)


def handcuff():
    """Two circular loops joined by a straight bridge."""
    q1 = np.array([-1.0, 0.0, 0.0])
    q2 = np.array([1.0, 0.0, 0.0])
    f1 = np.array([-3.0, 0.0, 0.0])
    f2 = np.array([3.0, 0.0, 0.0])
    zhat = np.array([0.0, 0.0, 1.0])
    verts = [("q1", q1), ("q2", q2), ("f1", f1), ("f2", f2)]
    arcs = [
        ("bridge", "q1", "q2", Segment(q1, q2)),
        ("l1a", "q1", "f1", CircularArc(np.array([-2.0, 0, 0]), zhat, 1.0, 0.0, math.pi)),
        ("l1b", "f1", "q1", CircularArc(np.array([-2.0, 0, 0]), zhat, 1.0, math.pi, 2 * math.pi)),
        ("l2a", "q2", "f2", CircularArc(np.array([2.0, 0, 0]), zhat, 1.0, math.pi, 0.0)),
        ("l2b", "f2", "q2", CircularArc(np.array([2.0, 0, 0]), zhat, 1.0, 2 * math.pi, math.pi)),
    ]
    return EmbeddedGraph(euclidean(), verts, arcs)


def eleven_ovals():
    """Eleven stadium ovals whose 60 crossings are valence-4 vertices.

    Six horizontal copies in planes z = k/7 and five vertical copies in planes
    y = j/6; every oval is two unit segments in the faces x = 0 and x = 1 plus
    two semicircular caps, and every horizontal oval crosses every vertical
    oval twice, on the straight segments.
    """
    zs = [k / 7.0 for k in range(1, 7)]
    ys = [j / 6.0 for j in range(1, 6)]
    verts = {}
    arcs = []

    def vertex(pos):
        key = tuple(round(c, 12) for c in pos)
        if key not in verts:
            verts[key] = (f"v{len(verts)}", np.asarray(pos, dtype=float))
        return verts[key][0]

    def add_chain(prefix, pts):
        """Straight run split at interior crossing points."""
        ids = [vertex(p) for p in pts]
        for i in range(len(pts) - 1):
            arcs.append((f"{prefix}s{i}", ids[i], ids[i + 1],
                         Segment(np.asarray(pts[i], float), np.asarray(pts[i + 1], float))))

    def add_cap(prefix, center, normal, start, end, via):
        vid0 = vertex(start)
        vid1 = vertex(end)
        geo = arc_from_endpoints(euclidean(), np.asarray(center, float),
                                 np.asarray(normal, float), 0.5, start, end,
                                 via=np.asarray(via, float))
        arcs.append((f"{prefix}cap", vid0, vid1, geo))

    for k, z in enumerate(zs):
        pre = f"h{k}"
        cuts = sorted(ys)
        add_chain(pre + "e0", [(0.0, 0.0, z)] + [(0.0, y, z) for y in cuts] + [(0.0, 1.0, z)])
        add_chain(pre + "e1", [(1.0, 0.0, z)] + [(1.0, y, z) for y in cuts] + [(1.0, 1.0, z)])
        add_cap(pre + "c0", (0.5, 0.0, z), (0, 0, 1), (0.0, 0.0, z), (1.0, 0.0, z),
                via=(0.5, -0.5, z))
        add_cap(pre + "c1", (0.5, 1.0, z), (0, 0, 1), (1.0, 1.0, z), (0.0, 1.0, z),
                via=(0.5, 1.5, z))
    for j, y in enumerate(ys):
        pre = f"o{j}"
        cuts = sorted(zs)
        add_chain(pre + "e0", [(0.0, y, 0.0)] + [(0.0, y, z) for z in cuts] + [(0.0, y, 1.0)])
        add_chain(pre + "e1", [(1.0, y, 0.0)] + [(1.0, y, z) for z in cuts] + [(1.0, y, 1.0)])
        add_cap(pre + "c0", (0.5, y, 0.0), (0, 1, 0), (0.0, y, 0.0), (1.0, y, 0.0),
                via=(0.5, y, -0.5))
        add_cap(pre + "c1", (0.5, y, 1.0), (0, 1, 0), (1.0, y, 1.0), (0.0, y, 1.0),
                via=(0.5, y, 1.5))

    vlist = list(verts.values())
    return EmbeddedGraph(euclidean(), vlist, arcs, notes=[ELEVEN_OVAL_NOTE])


_REGISTRY = {
    "greatCircle": (great_circle, 0),
    "yGraph": (y_graph, 0),
    "tetrahedron": (tetrahedron, 0),
    "cube": (cube, 0),
    "football": (football, (1, 2)),
    "elevenOvals": (eleven_ovals, 0),
    "theta": (theta_graph, 0),
    "handcuff": (handcuff, 0),
}


def names():
    return sorted(_REGISTRY)


def builtin_example(name, params=()):
    """Construct a named example graph; numeric params go to its constructor."""
    if name not in _REGISTRY:
        raise GeometryError("UNKNOWN_EXAMPLE", f"no example named {name!r}")
    fn, arity = _REGISTRY[name]
    params = tuple(float(p) for p in params)
    if arity == 0:
        if params:
            raise GeometryError("BAD_PARAMS", f"{name} takes no parameters")
        return fn()
    lo, hi = arity
    if not (lo <= len(params) <= hi):
        raise GeometryError("BAD_PARAMS", f"{name} takes {lo}..{hi} parameters")
    try:
        return fn(*params)
    except GeometryError:
        raise
    except (TypeError, ValueError) as e:
        raise GeometryError("BAD_PARAMS", str(e)) from None
