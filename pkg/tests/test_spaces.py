import math

import numpy as np
import pytest

from netcurv import spaces
from netcurv.spaces import (GeometryError, dist, euclidean, exp_map, geodesic,
                            hyperbolic, initial_direction, lift_point, log_map,
                            spherical, tangent_basis, tangent_project)

RNG = np.random.default_rng(42)


def random_point(space, rng, scale=1.0):
    return lift_point(space, rng.normal(scale=scale, size=3))


@pytest.mark.parametrize("space", [euclidean(), spherical(1.0), spherical(0.5),
                                   hyperbolic(1.0), hyperbolic(2.0)])
def test_geodesic_unit_speed(space):
    rng = np.random.default_rng(1)
    for _ in range(20):
        p = random_point(space, rng, 0.7)
        q = random_point(space, rng, 0.7)
        d = dist(space, p, q)
        for t in (0.0, 0.25, 0.5, 0.9, 1.0):
            x = geodesic(space, p, q, t)
            assert abs(dist(space, p, x) - t * d) < 1e-10
        assert abs(dist(space, q, p) - d) < 1e-12


@pytest.mark.parametrize("space", [spherical(1.0), hyperbolic(1.0)])
def test_exp_log_roundtrip(space):
    rng = np.random.default_rng(2)
    for _ in range(20):
        p = random_point(space, rng, 0.6)
        q = random_point(space, rng, 0.6)
        v = log_map(space, p, q)
        assert float(spaces.manifold_defect(space, exp_map(space, p, v))) < 1e-10
        assert np.allclose(exp_map(space, p, v), q, atol=1e-10)
        # log lives in the tangent space
        assert abs(spaces.mdot(space, v, p)) < 1e-10


def test_sphere_orthogonal_points():
    sp = spherical(1.0)
    p = np.array([1.0, 0.0, 0.0, 0.0])
    q = np.array([0.0, 1.0, 0.0, 0.0])
    assert abs(dist(sp, p, q) - math.pi / 2) < 1e-14


def test_sphere_antipodal_direction_fails():
    sp = spherical(1.0)
    p = np.array([0.0, 0.0, 0.0, 1.0])
    with pytest.raises(GeometryError) as err:
        initial_direction(sp, p, -p)
    assert err.value.code == "ANTIPODAL_PAIR"


@pytest.mark.parametrize("space", [spherical(1.0), hyperbolic(1.0)])
def test_tangent_basis_orthonormal(space):
    rng = np.random.default_rng(3)
    for _ in range(10):
        p = random_point(space, rng, 0.8)
        basis = tangent_basis(space, p)
        for i in range(3):
            assert abs(spaces.mdot(space, basis[i], p)) < 1e-10
            for j in range(3):
                want = 1.0 if i == j else 0.0
                assert abs(spaces.mdot(space, basis[i], basis[j]) - want) < 1e-10


@pytest.mark.parametrize("space", [spherical(1.0), hyperbolic(1.0)])
def test_tangent_projection(space):
    rng = np.random.default_rng(4)
    p = random_point(space, rng, 0.5)
    w = rng.normal(size=4)
    tp = tangent_project(space, p, w)
    assert abs(spaces.mdot(space, tp, p)) < 1e-10


def test_lift_point_flat_limit():
    x = np.array([0.3, -0.2, 0.5])
    for make in (spherical, hyperbolic):
        for kappa in (1e-2, 1e-4):
            p = lift_point(make(kappa), x)
            assert np.allclose(p[:3], x, atol=2 * kappa)


def test_dist_broadcasts_over_batches():
    sp = spherical(1.0)
    rng = np.random.default_rng(5)
    p = random_point(sp, rng, 0.4)
    qs = np.array([random_point(sp, rng, 0.4) for _ in range(7)])
    d = dist(sp, p, qs)
    assert d.shape == (7,)
    for i in range(7):
        assert abs(d[i] - dist(sp, p, qs[i])) < 1e-14
    # batched first argument against a single point
    d2 = dist(sp, qs, p)
    assert np.allclose(d2, d, atol=1e-14)
    u = initial_direction(sp, qs, p)
    assert u.shape == (7, 4)
    for i in range(7):
        assert np.allclose(u[i], initial_direction(sp, qs[i], p), atol=1e-12)
