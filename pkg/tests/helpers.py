"""Shared generators and independent oracles for the test suite."""

from __future__ import annotations

import math

import numpy as np

from netcurv import spaces
from netcurv.arcs import Polyline, Segment
from netcurv.graph import EmbeddedGraph, validate
from netcurv.spaces import GeometryError


def random_unit_vectors(rng, n, min_gap=0.0):
    """Unit vectors, optionally rejecting nearly coincident pairs."""
    while True:
        v = rng.normal(size=(n, 3))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        if min_gap <= 0.0:
            return v
        dots = v @ v.T
        np.fill_diagonal(dots, -1.0)
        if dots.max() < 1.0 - min_gap:
            return v


def fourier_loop(rng, n_modes=3, n_samples=160, scale=1.0):
    """Smooth random closed curve from a low-order trigonometric series."""
    t = np.linspace(0.0, 2.0 * math.pi, n_samples, endpoint=False)
    pts = np.zeros((n_samples, 3))
    pts[:, 0] = np.cos(t)
    pts[:, 1] = np.sin(t)
    for k in range(1, n_modes + 1):
        amp = rng.normal(scale=scale * 0.25 / k**2, size=(3, 2))
        for d in range(3):
            pts[:, d] += amp[d, 0] * np.cos(k * t) + amp[d, 1] * np.sin(k * t)
    return pts


def closed_curve_graph(rng, n_arcs=4):
    """Random closed curve split into polyline arcs at valence-2 vertices."""
    while True:
        pts = fourier_loop(rng)
        n = len(pts)
        cut = np.sort(rng.choice(np.arange(0, n, n // (2 * n_arcs)), size=n_arcs,
                                 replace=False))
        verts = [(f"v{i}", pts[cut[i]]) for i in range(n_arcs)]
        arcs = []
        ok = True
        for i in range(n_arcs):
            a, b = cut[i], cut[(i + 1) % n_arcs]
            seg = pts[a:b + 1] if b > a else np.vstack([pts[a:], pts[:b + 1]])
            if len(seg) < 4:
                ok = False
                break
            arcs.append((f"a{i}", f"v{i}", f"v{(i + 1) % n_arcs}", Polyline(seg)))
        if not ok:
            continue
        g = EmbeddedGraph(spaces.euclidean(), verts, arcs)
        if validate(g).ok:
            return g


def theta_graph_random(rng):
    """Random embedded theta: three transverse polyline arcs between two points."""
    while True:
        q0 = rng.normal(scale=0.3, size=3)
        q1 = q0 + np.array([2.0, 0, 0]) + rng.normal(scale=0.2, size=3)
        verts = [("q0", q0), ("q1", q1)]
        arcs = []
        t = np.linspace(0.0, 1.0, 40)
        bumps = random_unit_vectors(rng, 3, min_gap=0.05)
        for i in range(3):
            amp = 0.4 + 0.8 * rng.random()
            wig = rng.normal(scale=0.15, size=3)
            pts = (np.outer(1 - t, q0) + np.outer(t, q1)
                   + np.outer(np.sin(math.pi * t) * amp, bumps[i])
                   + np.outer(np.sin(2 * math.pi * t), wig))
            pts[0] = q0
            pts[-1] = q1
            arcs.append((f"a{i}", "q0", "q1", Polyline(pts)))
        g = EmbeddedGraph(spaces.euclidean(), verts, arcs)
        if validate(g).ok:
            return g


def frame_graph_random(rng):
    """Jittered tetrahedron skeleton: straight segments only."""
    base = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]],
                    dtype=float) / math.sqrt(3.0)
    pts = base + rng.normal(scale=0.15, size=base.shape)
    verts = [(f"v{i}", pts[i]) for i in range(4)]
    arcs = []
    n = 0
    for i in range(4):
        for j in range(i + 1, 4):
            arcs.append((f"e{n}", f"v{i}", f"v{j}", Segment(pts[i], pts[j])))
            n += 1
    return EmbeddedGraph(spaces.euclidean(), verts, arcs)


def random_graph_instance(rng):
    kind = rng.integers(0, 3)
    if kind == 0:
        return closed_curve_graph(rng, n_arcs=3)
    if kind == 1:
        return theta_graph_random(rng)
    return frame_graph_random(rng)


def admissible_apex(rng, graph, margin=0.05, tries=200):
    """Random apex with a healthy non-tangency margin, or None."""
    pts = graph.sample_points(16)
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    span = hi - lo
    t_dense = np.linspace(0.0, 1.0, 48)
    for _ in range(tries):
        apex = lo - 0.3 * span + rng.random(3) * 1.6 * span
        if np.min(np.linalg.norm(pts - apex, axis=1)) < 0.1:
            continue
        ok = True
        for a in graph.arcs:
            path = graph.path(a.id)
            pos = path.pos(t_dense)
            vel = path.vel(t_dense)
            w = pos - apex
            rho = np.linalg.norm(w, axis=1)
            speed = np.linalg.norm(vel, axis=1)
            sin = np.linalg.norm(np.cross(w, vel), axis=1) / (rho * speed)
            if sin.min() < margin:
                ok = False
                break
        if ok:
            return apex
    return None


def projection_length_oracle(graph, apex, n=6000):
    """Chord-sampled length of the radially projected graph (independent route)."""
    space = graph.space
    total = 0.0
    t = np.linspace(0.0, 1.0, n)
    for a in graph.arcs:
        pos = graph.path(a.id).pos(t)
        if space.curved:
            u = spaces.initial_direction(space, np.asarray(apex, float), pos)
            basis = spaces.tangent_basis(space, np.asarray(apex, float))
            u = np.stack([spaces.mdot(space, u, b) for b in basis], axis=-1)
        else:
            w = pos - np.asarray(apex, float)
            u = w / np.linalg.norm(w, axis=1, keepdims=True)
        dots = np.clip((u[1:] * u[:-1]).sum(axis=1), -1.0, 1.0)
        total += float(np.arccos(dots).sum())
    return total


def lift_graph(graph, space):
    """Map a Euclidean graph of segments/polylines into a curved model."""
    verts = [(v.id, spaces.lift_point(space, v.position)) for v in graph.vertices]
    arcs = []
    for a in graph.arcs:
        geo = a.geometry
        if isinstance(geo, Segment):
            new = Segment(spaces.lift_point(space, np.asarray(geo.a, float)),
                          spaces.lift_point(space, np.asarray(geo.b, float)))
        elif isinstance(geo, Polyline):
            new = Polyline(spaces.lift_point(space, np.asarray(geo.points, float)))
        else:
            t = np.linspace(0.0, 1.0, 80)
            pts = graph.path(a.id).pos(t)
            new = Polyline(spaces.lift_point(space, pts))
        arcs.append((a.id, a.start, a.end, new))
    return EmbeddedGraph(space, verts, arcs, notes=graph.notes)


def geodesic_polygon(space, pts3, close=True):
    """Lift flat points into the model and join consecutively by geodesics."""
    lifted = [spaces.lift_point(space, np.asarray(p, float)) for p in pts3]
    n = len(lifted)
    verts = [(f"v{i}", lifted[i]) for i in range(n)]
    last = n if close else n - 1
    arcs = [(f"e{i}", f"v{i}", f"v{(i + 1) % n}",
             Segment(lifted[i], lifted[(i + 1) % n])) for i in range(last)]
    return EmbeddedGraph(space, verts, arcs)


def curved_triangle(rng, space, scale=0.5):
    """Random geodesic triangle with a safe apex, or None on a bad draw."""
    pts = rng.normal(scale=scale, size=(3, 3))
    g = geodesic_polygon(space, pts)
    apex = spaces.lift_point(space, rng.normal(scale=0.3 * scale, size=3))
    t_dense = np.linspace(0.0, 1.0, 32)
    try:
        for a in g.arcs:
            path = g.path(a.id)
            pos = path.pos(t_dense)
            vel = path.vel(t_dense)
            rho = spaces.dist(space, apex, pos)
            if rho.min() < 0.05 * scale:
                return None
            u = -spaces.initial_direction(space, pos, apex)
            rdot = spaces.mdot(space, u, vel)
            speed = spaces.mnorm(space, vel)
            sin2 = 1.0 - (rdot / speed) ** 2
            if sin2.min() < 0.01:
                return None
    except GeometryError:
        return None
    return g, apex


def random_multigraph(rng, n_vertices=None):
    """Connected combinatorial multigraph with unit-segment placeholder geometry.

    Geometry is irrelevant for circuit tests; vertices are spread on a circle
    so construction succeeds.
    """
    n = n_vertices or int(rng.integers(2, 7))
    pos = [np.array([math.cos(2 * math.pi * i / n), math.sin(2 * math.pi * i / n), 0.0])
           for i in range(n)]
    verts = [(f"v{i}", pos[i]) for i in range(n)]
    arcs = []
    order = rng.permutation(n)
    for k in range(1, n):
        a, b = int(order[k - 1]), int(order[k])
        arcs.append((f"t{k}", f"v{a}", f"v{b}", Segment(pos[a], pos[b])))
    extra = int(rng.integers(1, 5))
    for k in range(extra):
        a, b = int(rng.integers(0, n)), int(rng.integers(0, n))
        if a == b:
            b = (a + 1) % n
        arcs.append((f"x{k}", f"v{a}", f"v{b}", Segment(pos[a], pos[b])))
    return EmbeddedGraph(spaces.euclidean(), verts, arcs)
