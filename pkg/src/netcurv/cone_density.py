"""Cone densities at an apex: the turning-formula route, the projection
oracle, the total-curvature bound, and the singularity classifier."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.stats import qmc

from . import curvature, quadrature, spaces
from .graph import EmbeddedGraph
from .spaces import GeometryError, mdot, mnorm

THRESHOLD_Y = 3.0 * math.pi
THRESHOLD_T = 6.0 * math.acos(-1.0 / 3.0)
BOUNDARY_BAND = 1e-6

EMBEDDED_ONLY = "EmbeddedOnly"
AT_WORST_Y = "AtWorstY"
AT_WORST_Y_UNLESS_T = "AtWorstYUnlessTCone"
UNCONSTRAINED = "Unconstrained"

_NOTE_Y = ("at the lower threshold itself a" " triple-sheet Y configuration is possible; "
           "below it only embedded sheets can occur")
_NOTE_T = ("at the upper threshold itself the tetrahedral T cone is possible; "
           "between the thresholds Y-type edges may occur but nothing worse")


@dataclass(frozen=True)
class ConeDensityReport:
    apex: np.ndarray
    density_gb: float
    density_projection: float
    per_arc_signed: dict
    endpoint_angle_terms: dict

    @property
    def discrepancy(self):
        return abs(self.density_gb - self.density_projection)


@dataclass(frozen=True)
class SingularityClass:
    label: str
    tc: float
    threshold_y: float
    threshold_t: float
    boundary: bool
    notes: tuple

    @property
    def margins(self):
        return {"tc": self.tc,
                "to_y_threshold": self.threshold_y - self.tc,
                "to_t_threshold": self.threshold_t - self.tc}


def endpoint_angle(arc, end, apex, space, graph=None) -> float:
    """Angle between the into-arc tangent at an endpoint and the apex direction."""
    from . import arcs as arcmod
    path = arc if isinstance(arc, arcmod.ArcPath) else arcmod.make_path(arc, space)
    t0 = 0.0 if end == "start" else 1.0
    q = path.pos(t0)
    apex = np.asarray(apex, dtype=float)
    gap = float(spaces.dist(space, apex, q))
    if gap <= 1e-12 * (1.0 + float(mnorm(space, q))):
        raise GeometryError("ENDPOINT_IS_APEX", "arc endpoint coincides with the apex")
    tangent = path.vel(t0) if end == "start" else -path.vel(1.0)
    if space.curved:
        tangent = spaces.tangent_project(space, q, tangent)
        toward = spaces.initial_direction(space, q, apex)
    else:
        toward = (apex - q) / gap
    tangent = tangent / mnorm(space, tangent)
    return float(spaces.angle_between(space, q, tangent, toward))


def cone_density_gb(graph: EmbeddedGraph, apex, cfg=quadrature.DEFAULT_CONFIG,
                    verify: bool = False) -> ConeDensityReport:
    """Apex density of the cone over the graph by the turning formula.

    2*pi*density = sum of signed curvature integrals in the cone frame plus
    (pi/2 - beta) for both endpoints of every arc; the projection length
    divided by 2*pi fills the independent oracle field.
    """
    if graph.space.curved:
        raise GeometryError("EUCLIDEAN_ONLY",
                            "the flat turning formula needs a Euclidean graph")
    apex = np.asarray(apex, dtype=float)
    per_arc = {}
    endpoint_terms = {}
    for a in graph.arcs:
        path = graph.path(a.id)
        per_arc[a.id] = curvature.signed_cone_curvature_integral(
            path, apex, graph.space, cfg)
        for end in ("start", "finish"):
            beta = endpoint_angle(path, end, apex, graph.space)
            endpoint_terms[(a.id, end)] = math.pi / 2.0 - beta
    total = sum(per_arc.values()) + sum(endpoint_terms.values())
    density_gb = total / (2.0 * math.pi)
    density_proj = curvature.projection_length(graph, apex, cfg) / (2.0 * math.pi)
    report = ConeDensityReport(apex, density_gb, density_proj, per_arc, endpoint_terms)
    if verify and report.discrepancy >= 1e-6:
        raise GeometryError("ORACLE_MISMATCH",
                            f"turning formula and projection disagree by "
                            f"{report.discrepancy:.3e}")
    return report


def density_upper_bound(graph: EmbeddedGraph, cfg=quadrature.DEFAULT_CONFIG,
                        seed: int = 0) -> float:
    """Total curvature over 2*pi bounds the apex density of every cone."""
    return curvature.total_curvature(graph, cfg, seed=seed).total / (2.0 * math.pi)


def classify_value(tc: float, band: float = BOUNDARY_BAND,
                   extra_notes=()) -> SingularityClass:
    """Threshold logic on a total-curvature value with a boundary band.

    Within the band of a threshold the inclusive side is reported together
    with the boundary flag, since numerics cannot certify strict inequality.
    """
    notes = [_NOTE_Y, _NOTE_T]
    notes.extend(extra_notes)
    near_y = abs(tc - THRESHOLD_Y) <= band
    near_t = abs(tc - THRESHOLD_T) <= band
    if near_y:
        label = AT_WORST_Y
    elif near_t:
        label = AT_WORST_Y_UNLESS_T
    elif tc < THRESHOLD_Y:
        label = EMBEDDED_ONLY
    elif tc < THRESHOLD_T:
        label = AT_WORST_Y_UNLESS_T
    else:
        label = UNCONSTRAINED
    return SingularityClass(label, float(tc), THRESHOLD_Y, THRESHOLD_T,
                            near_y or near_t, tuple(notes))


def classify(graph: EmbeddedGraph, cfg=quadrature.DEFAULT_CONFIG,
             seed: int = 0) -> SingularityClass:
    """Classify which singularities the graph's total curvature permits."""
    if graph.space.curved:
        raise GeometryError("EUCLIDEAN_ONLY",
                            "use the curvature-corrected classifier in curved spaces")
    tc = curvature.total_curvature(graph, cfg, seed=seed).total
    return classify_value(tc, extra_notes=graph.notes)


def _hull_samples(graph, count, seed=0):
    """Quasi-random points in the convex hull of the graph's sample points."""
    pts = graph.sample_points(24)
    sampler = qmc.Halton(d=5, scramble=False, seed=seed)
    raw = sampler.random(count)
    n = len(pts)
    out = []
    for row in raw:
        idx = (row[:4] * n).astype(int) % n
        w = np.ones(4)
        w[0] += row[4]  # break symmetry of equal weights
        w /= w.sum()
        out.append((pts[idx] * w[:, None]).sum(axis=0))
    return np.array(out)


def max_cone_density_over_hull(graph: EmbeddedGraph, cfg=quadrature.DEFAULT_CONFIG,
                               samples: int = 512):
    """Largest projection density over apexes in the hull of the graph.

    Quasi-random interior seeding followed by a Nelder-Mead polish; the
    result is a certified lower bound for the hull supremum (search is
    approximate).
    """
    if samples < 1:
        raise GeometryError("BAD_PARAMS", "samples must be positive")
    if graph.space.curved:
        raise GeometryError("EUCLIDEAN_ONLY", "hull density search is Euclidean")
    pts = graph.sample_points(24)
    guard = 1e-3 * graph.diameter()

    def density_at(x):
        if np.min(np.linalg.norm(pts - x, axis=1)) < guard:
            return -np.inf
        try:
            return curvature.projection_length(graph, x, cfg) / (2.0 * math.pi)
        except GeometryError:
            return -np.inf

    seeds = _hull_samples(graph, samples)
    vals = np.array([density_at(x) for x in seeds])
    order = np.argsort(-vals)
    best_x = seeds[order[0]]
    best_v = vals[order[0]]

    def neg(x):
        v = density_at(x)
        return 1e9 if not np.isfinite(v) else -v

    for i in order[:3]:
        res = minimize(neg, seeds[i], method="Nelder-Mead",
                       options={"xatol": 1e-8, "fatol": 1e-8, "maxiter": 200})
        if -res.fun > best_v:
            best_v = -res.fun
            best_x = res.x
    return best_x, float(best_v)
