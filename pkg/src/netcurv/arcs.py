"""Parametric arc primitives: geodesic segments, metric circles, spline polylines.

Every arc exposes position, velocity and acceleration as vectorized functions
of the parameter t in [0, 1] (embedded coordinates).  In curved spaces a
"segment" is the minimizing geodesic between its endpoints and a "circular"
arc is a metric circle: center is a point on the model surface, normal a unit
tangent vector there (the axis), radius the geodesic radius.  Polylines are
interpolated by a natural cubic spline through the samples and, in curved
spaces, projected back onto the model surface with exact chain-rule
derivatives.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from . import spaces
from .spaces import GeometryError, ModelSpace, mdot, mnorm


@dataclass(frozen=True)
class Segment:
    kind = "segment"
    a: np.ndarray
    b: np.ndarray


@dataclass(frozen=True)
class CircularArc:
    kind = "circular"
    center: np.ndarray
    normal: np.ndarray
    radius: float
    angle0: float
    angle1: float


@dataclass(frozen=True)
class Polyline:
    kind = "polyline"
    points: np.ndarray


@dataclass(frozen=True)
class ArcPath:
    """Compiled evaluator for one arc in one ambient space."""

    space: ModelSpace
    pos: object
    vel: object
    acc: object
    endpoints: tuple = field(default=None)

    def speed(self, t):
        return mnorm(self.space, self.vel(t))


def _in_plane_frame3(n):
    """Deterministic orthonormal pair spanning the plane orthogonal to n in R^3."""
    n = np.asarray(n, dtype=float)
    n = n / np.linalg.norm(n)
    k = int(np.argmin(np.abs(n)))
    e = np.zeros(3)
    e[k] = 1.0
    u = e - np.dot(e, n) * n
    u = u / np.linalg.norm(u)
    w = np.cross(n, u)
    return u, w


def _circle_frame(space, center, normal):
    """In-plane unit tangent pair (u, w) orthogonal to the circle axis."""
    if not space.curved:
        return _in_plane_frame3(normal)
    basis = spaces.tangent_basis(space, center)
    n3 = np.array([mdot(space, normal, b) for b in basis])
    nn = np.linalg.norm(n3)
    if nn < 1e-10:
        raise GeometryError("BAD_GEOMETRY", "circle axis is not tangent at its center")
    u3, w3 = _in_plane_frame3(n3 / nn)
    u = (basis * u3[:, None]).sum(axis=0)
    w = (basis * w3[:, None]).sum(axis=0)
    return u, w


def make_path(geometry, space):
    """Build the vectorized evaluator for a geometry in the given space."""
    if isinstance(geometry, Segment):
        return _segment_path(geometry, space)
    if isinstance(geometry, CircularArc):
        return _circular_path(geometry, space)
    if isinstance(geometry, Polyline):
        return _polyline_path(geometry, space)
    raise GeometryError("BAD_GEOMETRY", f"unknown arc geometry {type(geometry).__name__}")


def _segment_path(geo, space):
    a = np.asarray(geo.a, dtype=float)
    b = np.asarray(geo.b, dtype=float)
    if not space.curved:
        d = b - a

        def pos(t):
            t = np.asarray(t, dtype=float)
            return a + np.multiply.outer(t, d)

        def vel(t):
            t = np.asarray(t, dtype=float)
            return np.broadcast_to(d, t.shape + d.shape).copy() if t.ndim else d.copy()

        def acc(t):
            t = np.asarray(t, dtype=float)
            return np.zeros(t.shape + d.shape)

        return ArcPath(space, pos, vel, acc, endpoints=(a, b))

    R = space.radius
    L = float(spaces.dist(space, a, b))
    u = spaces.initial_direction(space, a, b)
    th = L / R  # total subtended angle
    if space.kind == spaces.SPHERICAL:
        cs, sn, sgn = np.cos, np.sin, -1.0
    else:
        cs, sn, sgn = np.cosh, np.sinh, 1.0

    def pos(t):
        ang = th * np.asarray(t, dtype=float)
        return np.multiply.outer(cs(ang), a) + np.multiply.outer(R * sn(ang), u)

    def vel(t):
        ang = th * np.asarray(t, dtype=float)
        return np.multiply.outer(sgn * th * sn(ang), a) + np.multiply.outer(R * th * cs(ang), u)

    def acc(t):
        return sgn * th**2 * pos(t)

    return ArcPath(space, pos, vel, acc, endpoints=(a, b))


def _circular_path(geo, space):
    c = np.asarray(geo.center, dtype=float)
    r = float(geo.radius)
    if r <= 0:
        raise GeometryError("BAD_GEOMETRY", "circle radius must be positive")
    u, w = _circle_frame(space, c, geo.normal)
    a0, a1 = float(geo.angle0), float(geo.angle1)
    dang = a1 - a0

    if not space.curved:
        base, rad = c, r
    elif space.kind == spaces.SPHERICAL:
        k = space.kappa
        base, rad = np.cos(k * r) * c, space.radius * np.sin(k * r)
    else:
        k = space.kappa
        base, rad = np.cosh(k * r) * c, space.radius * np.sinh(k * r)

    def pos(t):
        th = a0 + dang * np.asarray(t, dtype=float)
        return base + np.multiply.outer(rad * np.cos(th), u) + np.multiply.outer(rad * np.sin(th), w)

    def vel(t):
        th = a0 + dang * np.asarray(t, dtype=float)
        return np.multiply.outer(-rad * dang * np.sin(th), u) + np.multiply.outer(rad * dang * np.cos(th), w)

    def acc(t):
        th = a0 + dang * np.asarray(t, dtype=float)
        return np.multiply.outer(-rad * dang**2 * np.cos(th), u) + np.multiply.outer(-rad * dang**2 * np.sin(th), w)

    p0 = pos(0.0)
    p1 = pos(1.0)
    return ArcPath(space, pos, vel, acc, endpoints=(p0, p1))


def _polyline_path(geo, space):
    pts = np.asarray(geo.points, dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 4:
        raise GeometryError("POLYLINE_TOO_FEW_SAMPLES", "polyline needs at least 4 samples")
    knots = np.linspace(0.0, 1.0, pts.shape[0])
    spline = CubicSpline(knots, pts, axis=0)
    d1 = spline.derivative(1)
    d2 = spline.derivative(2)

    if not space.curved:
        def pos(t):
            return spline(np.asarray(t, dtype=float))

        return ArcPath(space, pos, lambda t: d1(np.asarray(t, dtype=float)),
                       lambda t: d2(np.asarray(t, dtype=float)),
                       endpoints=(pts[0], pts[-1]))

    R = space.radius
    sign = 1.0 if space.kind == spaces.SPHERICAL else -1.0

    def _eval(t, order):
        t = np.asarray(t, dtype=float)
        x = spline(t)
        # radial reprojection f = R * x * g with g = (sign*<x,x>)^(-1/2)
        q = sign * mdot(space, x, x)
        g = q ** (-0.5)
        if order == 0:
            return R * x * g[..., None]
        x1 = d1(t)
        xq1 = 2.0 * sign * mdot(space, x, x1)
        g1 = -0.5 * q ** (-1.5) * xq1
        if order == 1:
            return R * (x1 * g[..., None] + x * g1[..., None])
        x2 = d2(t)
        xq2 = 2.0 * sign * (mdot(space, x1, x1) + mdot(space, x, x2))
        g2 = 0.75 * q ** (-2.5) * xq1**2 - 0.5 * q ** (-1.5) * xq2
        return R * (x2 * g[..., None] + 2.0 * x1 * g1[..., None] + x * g2[..., None])

    def pos(t):
        return _eval(t, 0)

    path = ArcPath(space, pos, lambda t: _eval(t, 1), lambda t: _eval(t, 2),
                   endpoints=(pos(0.0), pos(1.0)))
    return path


def arc_from_endpoints(space, center, normal, radius, start, end,
                       prefer_minor=True, via=None):
    """Circular arc through two given points, choosing angles deterministically.

    With `prefer_minor` the shorter of the two candidate sweeps is used;
    passing a `via` point instead selects the sweep passing through it, which
    disambiguates half circles.
    """
    u, w = _circle_frame(space, center, normal)
    if space.curved:
        if space.kind == spaces.SPHERICAL:
            base = np.cos(space.kappa * radius) * np.asarray(center, dtype=float)
        else:
            base = np.cosh(space.kappa * radius) * np.asarray(center, dtype=float)
    else:
        base = np.asarray(center, dtype=float)

    def ang_of(p):
        d = np.asarray(p, dtype=float) - base
        return float(np.arctan2(mdot(space, d, w), mdot(space, d, u)))

    a0 = ang_of(start)
    a1 = ang_of(end)
    sweep = (a1 - a0) % (2 * np.pi)
    if via is not None:
        mid = (ang_of(via) - a0) % (2 * np.pi)
        if mid > sweep:
            sweep -= 2 * np.pi
    elif prefer_minor and sweep > np.pi:
        sweep -= 2 * np.pi
    return CircularArc(np.asarray(center, dtype=float), np.asarray(normal, dtype=float),
                       float(radius), a0, a0 + sweep)


def curvature_vector(path, t):
    """Geodesic curvature vector of the arc in its ambient model space."""
    space = path.space
    v = path.vel(t)
    a = path.acc(t)
    sp = mnorm(space, v)
    sp2 = sp**2
    spd = mdot(space, v, a) / sp
    # ambient derivative of the unit tangent with respect to arclength
    dTds = (a - v * (spd / sp)[..., None]) / sp2[..., None] if np.ndim(sp) else \
        (a - v * (spd / sp)) / sp2
    if not space.curved:
        return dTds
    return spaces.tangent_project(space, path.pos(t), dTds)


def curvature_density(path, t):
    """|k| * |gamma'|, the integrand of the unsigned curvature integral."""
    k = curvature_vector(path, t)
    return mnorm(path.space, k) * path.speed(t)
