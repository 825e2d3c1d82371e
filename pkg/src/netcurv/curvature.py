"""Curvature quadrature along arcs and assembly of graph total curvature."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import arcs as arcmod
from . import quadrature, spaces, steiner
from .graph import EmbeddedGraph
from .quadrature import QuadratureConfig
from .spaces import GeometryError, mdot, mnorm

TANGENCY_TOL = 1e-6   # minimum sine of the angle between an arc and the radial direction
APEX_TOL = 1e-12      # relative distance below which the apex is "on" the curve


@dataclass(frozen=True)
class TotalCurvatureReport:
    per_arc: dict
    per_vertex: dict
    total: float

    def vertex_total(self):
        return sum(r.tc for r in self.per_vertex.values())

    def arc_total(self):
        return sum(self.per_arc.values())


def _as_path(arc, space):
    if isinstance(arc, arcmod.ArcPath):
        return arc
    return arcmod.make_path(arc, space)


def arc_curvature_integral(arc, space, cfg=quadrature.DEFAULT_CONFIG) -> float:
    """Integral of |k| ds along one arc (unsigned geodesic curvature)."""
    path = _as_path(arc, space)
    val, _ = quadrature.integrate(lambda t: arcmod.curvature_density(path, t), cfg=cfg)
    return val


def total_curvature(graph: EmbeddedGraph, cfg=quadrature.DEFAULT_CONFIG,
                    seed: int = 0) -> TotalCurvatureReport:
    """Arc curvature integrals plus the per-vertex contributions."""
    per_arc = {a.id: arc_curvature_integral(graph.path(a.id), graph.space, cfg)
               for a in graph.arcs}
    per_vertex = {v.id: steiner.vertex_tc(graph, v.id, seed=seed)
                  for v in graph.vertices}
    total = sum(per_arc.values()) + sum(r.tc for r in per_vertex.values())
    return TotalCurvatureReport(per_arc, per_vertex, total)


def _radial_data(path, apex, t):
    """Distance rho, speed, radial rate and away-from-apex direction along the arc."""
    space = path.space
    pos = path.pos(t)
    vel = path.vel(t)
    speed = mnorm(space, vel)
    if not space.curved:
        w = pos - apex
        rho = np.linalg.norm(w, axis=-1)
        _guard_apex(rho)
        u_away = w / np.expand_dims(rho, -1) if np.ndim(rho) else w / rho
    else:
        rho = spaces.dist(space, apex, pos)
        _guard_apex(rho)
        u_away = -spaces.initial_direction(space, pos, apex)
    rdot = mdot(space, u_away, vel)
    return rho, speed, rdot, u_away, vel


def _cone_normal(space, u_away, vel, speed, rdot):
    """Unit normal in the (tangent, radial) plane, pointing away from the apex."""
    coef = rdot / speed**2
    perp = u_away - (np.expand_dims(coef, -1) if np.ndim(coef) else coef) * vel
    pn = mnorm(space, perp)
    if np.any(pn <= TANGENCY_TOL):
        raise GeometryError("RADIAL_TANGENCY",
                            "arc is tangent to the radial direction within tolerance")
    return perp / (np.expand_dims(pn, -1) if np.ndim(pn) else pn)


def _guard_apex(rho):
    scale = float(np.max(rho)) or 1.0
    if np.any(rho <= APEX_TOL * scale):
        raise GeometryError("APEX_ON_ARC", "apex lies on the arc")


def signed_cone_curvature_integral(arc, apex, space,
                                   cfg=quadrature.DEFAULT_CONFIG) -> float:
    """-integral of k . nu_C ds in the frame of the cone over the arc.

    nu_C is the unit normal in the plane of the tangent and the radial
    direction, pointing away from the apex.
    """
    path = _as_path(arc, space)
    apex = np.asarray(apex, dtype=float)

    def integrand(t):
        _, speed, rdot, u_away, vel = _radial_data(path, apex, t)
        nu = _cone_normal(space, u_away, vel, speed, rdot)
        k = arcmod.curvature_vector(path, t)
        return -mdot(space, k, nu) * speed

    val, _ = quadrature.integrate(integrand, cfg=cfg)
    return val


def arc_projection_length(arc, apex, space, cfg=quadrature.DEFAULT_CONFIG) -> float:
    """Length of the radial projection of one arc onto the unit link at the apex."""
    path = _as_path(arc, space)
    apex = np.asarray(apex, dtype=float)
    k = space.kappa

    def integrand(t):
        rho, speed, rdot, _, _ = _radial_data(path, apex, t)
        trans = np.sqrt(np.maximum(speed**2 - rdot**2, 0.0))
        if not space.curved:
            return trans / rho
        if space.kind == spaces.SPHERICAL:
            return trans * k / np.sin(k * rho)
        return trans * k / np.sinh(k * rho)

    val, _ = quadrature.integrate(integrand, cfg=cfg)
    return val


def projection_length(graph: EmbeddedGraph, apex,
                      cfg=quadrature.DEFAULT_CONFIG) -> float:
    """Total length of the radial projection of the graph from the apex.

    In curved spaces this is the link length of the comparison cone at the
    apex, the curved analogue of projecting to the unit sphere.
    """
    apex = np.asarray(apex, dtype=float)
    total = 0.0
    for a in graph.arcs:
        try:
            total += arc_projection_length(graph.path(a.id), apex, graph.space, cfg)
        except GeometryError as e:
            if e.code == "APEX_ON_ARC":
                raise GeometryError("APEX_ON_GRAPH",
                                    f"apex lies on arc {a.id}") from None
            raise
    return total
