"""Figure rendering for the radial projection of a graph from an apex."""

from __future__ import annotations

import math

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from . import curvature, spaces
from .graph import EmbeddedGraph
from .spaces import GeometryError

MAX_STEP = 0.01  # radians between consecutive plot samples


def _unit_directions(graph, apex, t, arc_id):
    """Radial projection of one arc onto the unit link, as 3-vectors."""
    space = graph.space
    path = graph.path(arc_id)
    pts = path.pos(t)
    if not space.curved:
        w = pts - apex
        return w / np.linalg.norm(w, axis=-1, keepdims=True)
    u = spaces.initial_direction(space, apex, pts)
    basis = spaces.tangent_basis(space, apex)
    return np.stack([spaces.mdot(space, u, b) for b in basis], axis=-1)


def _orthographic_frame(direction):
    d = np.asarray(direction, dtype=float)
    d = d / np.linalg.norm(d)
    k = int(np.argmin(np.abs(d)))
    e = np.zeros(3)
    e[k] = 1.0
    a = e - np.dot(e, d) * d
    a /= np.linalg.norm(a)
    b = np.cross(d, a)
    return a, b, d


def render_projection(graph: EmbeddedGraph, apex, out_path, direction=None,
                      cfg=None):
    """Write an orthographic figure of the radial projection to a file.

    The view axis defaults to the apex-to-centroid direction; arcs are
    sampled so that consecutive samples subtend at most 0.01 radians.
    """
    from .quadrature import DEFAULT_CONFIG
    cfg = cfg or DEFAULT_CONFIG
    apex = np.asarray(apex, dtype=float)
    space = graph.space

    if direction is None:
        pts = graph.sample_points(8)
        centroid = pts.mean(axis=0)
        if space.curved:
            direction = spaces.tangent_coords(
                space, apex, spaces.initial_direction(space, apex,
                                                      spaces.project_to_manifold(space, centroid)))
        else:
            direction = centroid - apex
        if np.linalg.norm(direction) < 1e-12:
            direction = np.array([0.0, 0.0, 1.0])
    a, b, d = _orthographic_frame(direction)

    fig, ax = plt.subplots(figsize=(6, 6))
    circle = plt.Circle((0, 0), 1.0, fill=False, color="0.6", lw=0.8, ls="--")
    ax.add_patch(circle)
    for arc in graph.arcs:
        length = curvature.arc_projection_length(graph.path(arc.id), apex, space, cfg)
        n = max(int(math.ceil(length / MAX_STEP)) + 2, 8)
        t = np.linspace(0.0, 1.0, n)
        u = _unit_directions(graph, apex, t, arc.id)
        front = u @ d >= 0
        x = u @ a
        y = u @ b
        x_front = np.where(front, x, np.nan)
        y_front = np.where(front, y, np.nan)
        x_back = np.where(front, np.nan, x)
        y_back = np.where(front, np.nan, y)
        ax.plot(x_front, y_front, color="C0", lw=1.4)
        ax.plot(x_back, y_back, color="C0", lw=1.0, alpha=0.35)
    ax.set_aspect("equal")
    ax.set_xlim(-1.05, 1.05)
    ax.set_ylim(-1.05, 1.05)
    ax.set_xlabel("link x")
    ax.set_ylabel("link y")
    ax.set_title("radial projection from apex")
    fig.savefig(out_path, bbox_inches="tight")
    plt.close(fig)
    return out_path
