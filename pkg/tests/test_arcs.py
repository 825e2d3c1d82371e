import math

import numpy as np
import pytest

from netcurv import spaces
from netcurv.arcs import (CircularArc, Polyline, Segment, arc_from_endpoints,
                          curvature_density, curvature_vector, make_path)
from netcurv.quadrature import integrate
from netcurv.spaces import euclidean, hyperbolic, lift_point, spherical


def finite_difference_check(path, t, h=1e-6):
    p0 = path.pos(t - h)
    p1 = path.pos(t + h)
    v = path.vel(t)
    assert np.allclose((p1 - p0) / (2 * h), v, atol=1e-6)
    v0 = path.vel(t - h)
    v1 = path.vel(t + h)
    assert np.allclose((v1 - v0) / (2 * h), path.acc(t), atol=1e-5)


def test_circular_arc_derivatives():
    geo = CircularArc(np.array([1.0, 2.0, -1.0]), np.array([0.0, 0.0, 1.0]),
                      2.0, 0.3, 2.4)
    path = make_path(geo, euclidean())
    for t in (0.1, 0.5, 0.85):
        finite_difference_check(path, t)
    k = curvature_vector(path, 0.4)
    assert abs(np.linalg.norm(k) - 0.5) < 1e-12  # |k| = 1/r


def test_segment_curvature_zero():
    path = make_path(Segment(np.zeros(3), np.array([1.0, 2.0, 3.0])), euclidean())
    assert np.allclose(curvature_density(path, np.linspace(0, 1, 9)), 0.0)


@pytest.mark.parametrize("space", [spherical(1.0), hyperbolic(1.0)])
def test_geodesic_segment_has_no_curvature(space):
    a = lift_point(space, np.array([0.3, 0.1, -0.2]))
    b = lift_point(space, np.array([-0.4, 0.5, 0.3]))
    path = make_path(Segment(a, b), space)
    t = np.linspace(0.05, 0.95, 7)
    assert float(np.max(curvature_density(path, t))) < 1e-10
    for tt in (0.2, 0.7):
        finite_difference_check(path, tt)
    assert float(spaces.manifold_defect(space, path.pos(t)).max()) < 1e-12


@pytest.mark.parametrize("space", [spherical(1.0), hyperbolic(0.7)])
def test_metric_circle_on_manifold(space):
    c = lift_point(space, np.array([0.2, -0.1, 0.3]))
    basis = spaces.tangent_basis(space, c)
    geo = CircularArc(c, basis[0], 0.8, 0.2, 2.9)
    path = make_path(geo, space)
    t = np.linspace(0.0, 1.0, 33)
    pts = path.pos(t)
    assert float(spaces.manifold_defect(space, pts).max()) < 1e-12
    # every point at geodesic distance `radius` from the center
    assert np.allclose(spaces.dist(space, c, pts), 0.8, atol=1e-12)
    for tt in (0.15, 0.6):
        finite_difference_check(path, tt)


def test_metric_circle_curvature_spherical():
    # intrinsic curvature of a circle of geodesic radius r on the unit sphere
    sp = spherical(1.0)
    c = spaces.basepoint(sp)
    basis = spaces.tangent_basis(sp, c)
    r = 0.8
    geo = CircularArc(c, basis[2], r, 0.0, 2 * math.pi)
    path = make_path(geo, sp)
    k = curvature_vector(path, np.array([0.3]))
    assert abs(float(spaces.mnorm(sp, k)[0]) - 1.0 / math.tan(r)) < 1e-10


def test_polyline_spline_tracks_circle():
    t = np.linspace(0.0, 1.0, 60)
    pts = np.stack([np.cos(t * 2), np.sin(t * 2), 0 * t], axis=1)
    path = make_path(Polyline(pts), euclidean())
    val, _ = integrate(lambda s: curvature_density(path, s))
    # natural-spline end conditions cost a few 1e-5 of turning
    assert abs(val - 2.0) < 1e-4


def test_curved_polyline_projected_to_manifold():
    sp = spherical(1.0)
    flat = np.stack([np.linspace(-0.4, 0.5, 24),
                     np.linspace(0.0, 0.3, 24) ** 2,
                     np.zeros(24)], axis=1)
    pts = lift_point(sp, flat)
    path = make_path(Polyline(pts), sp)
    t = np.linspace(0.0, 1.0, 50)
    assert float(spaces.manifold_defect(sp, path.pos(t)).max()) < 1e-12
    for tt in (0.3, 0.8):
        finite_difference_check(path, tt)


def test_arc_from_endpoints_minor_and_via():
    start = np.array([1.0, 0.0, 0.0])
    end = np.array([0.0, 1.0, 0.0])
    geo = arc_from_endpoints(euclidean(), np.zeros(3), np.array([0.0, 0.0, 1.0]),
                             1.0, start, end)
    assert abs(abs(geo.angle1 - geo.angle0) - math.pi / 2) < 1e-12
    via = np.array([-1.0, 0.0, 0.0])
    geo2 = arc_from_endpoints(euclidean(), np.zeros(3), np.array([0.0, 0.0, 1.0]),
                              1.0, start, end, via=via)
    assert abs(abs(geo2.angle1 - geo2.angle0) - 3 * math.pi / 2) < 1e-12
    path = make_path(geo2, euclidean())
    mid = path.pos(np.array([2.0 / 3.0]))[0]
    assert np.allclose(mid, via, atol=1e-9)
