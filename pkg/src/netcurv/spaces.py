"""Ambient model spaces and their geodesic primitives.

Three ambient geometries are supported: Euclidean 3-space, the round sphere
of radius 1/kappa embedded in R^4, and the hyperboloid sheet of curvature
-kappa^2 embedded in Minkowski space R^{3,1}.  Curved points are stored in
embedded coordinates (x, y, z, w) where w is the distinguished coordinate:
on the sphere |x|^2 = 1/kappa^2, on the hyperboloid
x^2 + y^2 + z^2 - w^2 = -1/kappa^2 with w > 0.

All functions broadcast over a leading batch axis: `p` is a single point,
`q` may be an (n, dim) array.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

EUCLIDEAN = "euclidean"
SPHERICAL = "spherical"
HYPERBOLIC = "hyperbolic"

ON_MANIFOLD_RTOL = 1e-10


class GeometryError(ValueError):
    """Numerical-geometry failure with a machine-readable code."""

    def __init__(self, code, message=""):
        super().__init__(message or code)
        self.code = code


@dataclass(frozen=True)
class ModelSpace:
    kind: str
    kappa: float = 0.0

    def __post_init__(self):
        if self.kind not in (EUCLIDEAN, SPHERICAL, HYPERBOLIC):
            raise GeometryError("UNKNOWN_SPACE", f"unknown ambient kind {self.kind!r}")
        if self.kind == EUCLIDEAN:
            if self.kappa != 0.0:
                raise GeometryError("BAD_PARAMS", "euclidean space takes no curvature")
        elif not self.kappa > 0.0:
            raise GeometryError("BAD_PARAMS", "curved space needs kappa > 0")

    @property
    def curved(self):
        return self.kind != EUCLIDEAN

    @property
    def dim(self):
        return 4 if self.curved else 3

    @property
    def radius(self):
        return 1.0 / self.kappa


def euclidean():
    return ModelSpace(EUCLIDEAN)


def spherical(kappa=1.0):
    return ModelSpace(SPHERICAL, float(kappa))


def hyperbolic(kappa=1.0):
    return ModelSpace(HYPERBOLIC, float(kappa))


def mdot(space, u, v):
    """Ambient inner product: Euclidean, or Minkowski with signature (+,+,+,-)."""
    uv = np.asarray(u) * np.asarray(v)
    if space.kind == HYPERBOLIC:
        return uv[..., :3].sum(axis=-1) - uv[..., 3]
    return uv.sum(axis=-1)


def _bcast(x):
    """Append a length-1 axis to batched scalars so they scale vector rows."""
    x = np.asarray(x)
    return x[..., None] if x.ndim else x


def mnorm(space, v):
    return np.sqrt(np.maximum(mdot(space, v, v), 0.0))


def manifold_defect(space, p):
    """Relative deviation of p from the model hypersurface (0 for Euclidean)."""
    p = np.asarray(p, dtype=float)
    if not space.curved:
        return np.zeros(p.shape[:-1])
    rr = space.radius**2
    if space.kind == SPHERICAL:
        return np.abs(mdot(space, p, p) - rr) / rr
    return np.abs(mdot(space, p, p) + rr) / rr


def basepoint(space):
    if not space.curved:
        return np.zeros(3)
    b = np.zeros(4)
    b[3] = space.radius
    return b


def project_to_manifold(space, x):
    """Radially rescale embedded coordinates back onto the model surface."""
    x = np.asarray(x, dtype=float)
    if not space.curved:
        return x
    if space.kind == SPHERICAL:
        scale = space.radius / np.sqrt(mdot(space, x, x))
    else:
        scale = space.radius / np.sqrt(-mdot(space, x, x))
    return x * scale[..., None] if x.ndim > 1 else x * scale


def tangent_project(space, p, w):
    """Component of an ambient vector w in the tangent space at p."""
    if not space.curved:
        return np.asarray(w, dtype=float)
    rr = space.radius**2
    coef = mdot(space, w, p) / rr
    if space.kind == SPHERICAL:
        return w - _bcast(coef) * p
    return w + _bcast(coef) * p


def dist(space, p, q):
    """Geodesic distance; broadcasts over rows of q."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if not space.curved:
        return np.linalg.norm(q - p, axis=-1)
    R = space.radius
    if space.kind == SPHERICAL:
        c = mdot(space, p, q) / R**2
        w = q - _bcast(c) * p
        return R * np.arctan2(mnorm(space, w) / R, c)
    c = -mdot(space, p, q) / R**2  # cosh of the angle
    w = q - _bcast(c) * p
    # w is the sinh-scaled tangent component; asinh is stable for small gaps
    return R * np.arcsinh(mnorm(space, w) / R)


def initial_direction(space, p, q):
    """Unit tangent at p of the minimizing geodesic toward q."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if not space.curved:
        w = q - p
        n = np.linalg.norm(w, axis=-1)
        _check_separated(n, np.ones_like(n), 1e-300)
        return w / _bcast(n)
    R = space.radius
    sign = 1.0 if space.kind == SPHERICAL else -1.0
    c = sign * mdot(space, p, q) / R**2
    w = q - _bcast(c) * p
    n = mnorm(space, w)
    _check_separated(n, c, 1e-12 * R)
    return w / _bcast(n)


def _check_separated(n, c, tol):
    n = np.atleast_1d(np.asarray(n, dtype=float))
    c = np.atleast_1d(np.asarray(c, dtype=float))
    bad = n < tol
    if np.any(bad):
        if np.any(np.broadcast_to(c, n.shape)[bad] < 0.0):
            raise GeometryError("ANTIPODAL_PAIR", "no unique geodesic between antipodal points")
        raise GeometryError("COINCIDENT_POINTS", "direction between coincident points")


def exp_map(space, p, v):
    """Exponential map: follow the geodesic from p with initial velocity v."""
    p = np.asarray(p, dtype=float)
    v = np.asarray(v, dtype=float)
    if not space.curved:
        return p + v
    R = space.radius
    s = mnorm(space, v)
    small = s < 1e-300
    s_safe = np.where(small, 1.0, s)
    u = v / (s_safe[..., None] if v.ndim > 1 else s_safe)
    th = s / R
    if space.kind == SPHERICAL:
        out = np.cos(th)[..., None] * p + (R * np.sin(th))[..., None] * u if v.ndim > 1 else \
            np.cos(th) * p + R * np.sin(th) * u
    else:
        out = np.cosh(th)[..., None] * p + (R * np.sinh(th))[..., None] * u if v.ndim > 1 else \
            np.cosh(th) * p + R * np.sinh(th) * u
    if v.ndim > 1:
        out[small] = p
        return out
    return p if small else out


def log_map(space, p, q):
    """Inverse exponential: the tangent vector at p reaching q at time 1."""
    d = dist(space, p, q)
    if np.ndim(d) == 0 and d == 0.0:
        return np.zeros_like(np.asarray(p, dtype=float))
    u = initial_direction(space, p, q)
    return u * (d[..., None] if np.ndim(d) else d)


def geodesic(space, p, q, t):
    """Point at parameter t in [0, 1] of the minimizing geodesic p -> q."""
    v = log_map(space, p, q)
    t = np.asarray(t, dtype=float)
    if t.ndim:
        return exp_map(space, p, t[:, None] * v)
    return exp_map(space, p, t * v)


def tangent_basis(space, p):
    """Deterministic orthonormal basis of the tangent space at p (3 vectors)."""
    if not space.curved:
        return np.eye(3)
    p = np.asarray(p, dtype=float)
    basis = []
    for i in range(4):
        e = np.zeros(4)
        e[i] = 1.0
        w = tangent_project(space, p, e)
        for b in basis:
            w = w - mdot(space, w, b) * b
        n = mnorm(space, w)
        if n > 1e-8:
            basis.append(w / n)
        if len(basis) == 3:
            break
    if len(basis) != 3:
        raise GeometryError("DEGENERATE_FRAME", "could not frame the tangent space")
    return np.array(basis)


def tangent_coords(space, p, vectors):
    """Components of tangent vectors at p in the deterministic orthonormal frame."""
    if not space.curved:
        return np.asarray(vectors, dtype=float)
    basis = tangent_basis(space, p)
    v = np.atleast_2d(np.asarray(vectors, dtype=float))
    out = np.stack([mdot(space, v, b) for b in basis], axis=-1)
    return out if np.asarray(vectors).ndim > 1 else out[0]


def lift_point(space, x):
    """Map a Euclidean 3-vector into the model via the exponential at the basepoint.

    As kappa -> 0 the first three embedded coordinates converge to x, which
    makes lifted graphs suitable for flat-limit comparisons.
    """
    x = np.asarray(x, dtype=float)
    if not space.curved:
        return x
    v = np.zeros(x.shape[:-1] + (4,))
    v[..., :3] = x
    return exp_map(space, basepoint(space), v)


def angle_between(space, p, u, v):
    """Angle in [0, pi] between unit tangent vectors at p."""
    c = np.clip(mdot(space, u, v), -1.0, 1.0)
    w = v - c[..., None] * u if np.ndim(c) else v - c * u
    return np.arctan2(mnorm(space, w), c)
