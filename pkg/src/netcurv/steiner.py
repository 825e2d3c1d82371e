"""Spherical Steiner points and vertex contributions to total curvature.

The contribution of a vertex with unit tangents T_1..T_d is
d*pi/2 - min_e sum_l angle(T_l, e), the minimum taken over unit directions e.
Low valences admit exact candidate enumeration (the minimizer is either a
tangent direction or a balanced interior point); higher valences fall back to
multistart projected subgradient descent, cross-checkable against an
exhaustive grid oracle with a Lipschitz guarantee.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import spaces
from .graph import EmbeddedGraph, vertex_tangents
from .spaces import GeometryError

VALENCE2_EXACT = "Valence2Exact"
VALENCE3_EXACT = "Valence3Exact"
VALENCE4_CANDIDATES = "Valence4Candidates"
GENERAL_DESCENT = "GeneralDescent"
GRID_ORACLE = "GridOracle"

GRID_COVER_CONSTANT = 2.8  # covering radius of an n-point Fibonacci grid is below this / sqrt(n)
_GRID_CACHE = {}


@dataclass(frozen=True)
class TangentConfiguration:
    directions: np.ndarray   # (d, 3), unit rows

    def __post_init__(self):
        d = np.asarray(self.directions, dtype=float)
        if d.ndim != 2 or d.shape[1] != 3 or d.shape[0] < 2:
            raise GeometryError("BAD_PARAMS", "need at least two 3-vector directions")
        if np.any(np.abs(np.linalg.norm(d, axis=1) - 1.0) > 1e-12):
            raise GeometryError("BAD_PARAMS", "directions must be unit vectors")
        object.__setattr__(self, "directions", d)

    @property
    def valence(self):
        return self.directions.shape[0]


@dataclass(frozen=True)
class SteinerResult:
    e0: np.ndarray
    angle_sum: float
    tc: float
    method: str
    certificate: dict


def _result(config, e0, angle_sum, method, certificate):
    d = config.valence
    return SteinerResult(np.asarray(e0, dtype=float), float(angle_sum),
                         d * math.pi / 2.0 - float(angle_sum), method, certificate)


def angle_objective(config: TangentConfiguration, e) -> float:
    """Sum of angles between e and every tangent direction."""
    e = np.asarray(e, dtype=float)
    dots = np.clip(config.directions @ e, -1.0, 1.0)
    return float(np.arccos(dots).sum())


def _objective_many(T, E):
    """Angle-sum objective for an (m, 3) batch of unit directions."""
    return np.arccos(np.clip(E @ T.T, -1.0, 1.0)).sum(axis=1)


def _lex_min(points):
    """Lexicographically smallest row (ties in early coordinates broken later)."""
    pts = np.asarray(points, dtype=float)
    idx = np.lexsort((pts[:, 2], pts[:, 1], pts[:, 0]))
    return pts[idx[0]]


def _pick_best(T, candidates, value_tol=1e-12):
    E = np.asarray(candidates, dtype=float)
    vals = _objective_many(T, E)
    best = vals.min()
    ties = E[vals <= best + value_tol]
    return _lex_min(ties), float(best)


def _descent_batch(T, starts, grad_tol=1e-10, max_iter=500):
    """Projected subgradient descent on the sphere from a batch of starts.

    Terms with e at +-T_l are non-smooth; their gradient is dropped there,
    which is a valid subgradient since the term is extremal.  Step halving
    until improvement; a step is accepted only if the objective decreases.
    """
    E = np.array(starts, dtype=float)
    E /= np.linalg.norm(E, axis=1, keepdims=True)
    f = _objective_many(T, E)
    step = np.full(len(E), 0.5)
    active = np.ones(len(E), dtype=bool)
    for _ in range(max_iter):
        if not active.any():
            break
        Ea = E[active]
        dots = np.clip(Ea @ T.T, -1.0, 1.0)            # (m, d)
        rej = T[None, :, :] - dots[:, :, None] * Ea[:, None, :]
        sin = np.linalg.norm(rej, axis=2)
        ok = sin > 1e-12
        with np.errstate(invalid="ignore"):
            xi = np.where(ok[:, :, None], rej / np.where(ok, sin, 1.0)[:, :, None], 0.0)
        grad = -xi.sum(axis=1)                          # Riemannian gradient
        gnorm = np.linalg.norm(grad, axis=1)
        conv = gnorm < grad_tol
        trial = Ea - step[active][:, None] * grad
        trial /= np.linalg.norm(trial, axis=1, keepdims=True)
        f_trial = _objective_many(T, trial)
        better = f_trial < f[active]
        idx = np.flatnonzero(active)
        acc = idx[better & ~conv]
        E[acc] = trial[better & ~conv]
        f[acc] = f_trial[better & ~conv]
        step[acc] = np.minimum(step[acc] * 2.0, 1.0)
        rej_idx = idx[~better & ~conv]
        step[rej_idx] *= 0.5
        active[idx[conv]] = False
        active[step < 1e-14] = False
    return E, f


def _fermat_points(T, damping=0.5, tol=1e-12, max_iter=200):
    """Interior balanced points of three directions via damped Weiszfeld steps."""
    starts = []
    s = T.sum(axis=0)
    if np.linalg.norm(s) > 1e-9:
        starts.append(s / np.linalg.norm(s))
        starts.append(-s / np.linalg.norm(s))
    for i in range(3):
        m = T[i] + T[(i + 1) % 3]
        if np.linalg.norm(m) > 1e-9:
            starts.append(m / np.linalg.norm(m))
    found = []
    for e in starts:
        e = np.array(e, dtype=float)
        converged = False
        for _ in range(max_iter):
            dots = np.clip(T @ e, -1.0, 1.0)
            ang = np.arccos(dots)
            # a collision with +-T_l leaves no usable step direction; vertex
            # candidates are covered by the T_l set anyway
            if np.any(ang < 1e-9) or np.any(ang > np.pi - 1e-9):
                break
            rej = T - dots[:, None] * e
            xi = rej / np.linalg.norm(rej, axis=1, keepdims=True)
            resid = xi.sum(axis=0)
            if np.linalg.norm(resid) < tol:
                converged = True
                break
            u = resid / (1.0 / ang).sum()
            e = _sphere_exp(e, damping * u)
        if converged:
            found.append(e)
    # fall back on a coarse scan + descent when no interior point emerged
    if not found:
        grid = _fibonacci_grid(2000)
        vals = _objective_many(T, grid)
        seed = grid[int(vals.argmin())]
        E, _ = _descent_batch(T, [seed])
        found.append(E[0])
    out = []
    for e in found:
        if not any(np.linalg.norm(e - g) < 1e-9 for g in out):
            out.append(e)
    return out


def _sphere_exp(e, v):
    n = np.linalg.norm(v)
    if n < 1e-300:
        return e
    return math.cos(n) * e + math.sin(n) * (v / n)


def steiner_valence3(config: TangentConfiguration) -> SteinerResult:
    """Exact enumeration for three tangents: interior balanced points or corners."""
    T = config.directions
    if config.valence != 3:
        raise GeometryError("BAD_PARAMS", "steiner_valence3 needs exactly 3 directions")
    candidates = list(T) + _fermat_points(T)
    e0, best = _pick_best(T, candidates)
    return _result(config, e0, best, VALENCE3_EXACT,
                   {"candidates": len(candidates)})


def _circle_scan(T, axis, n=4096):
    """1-D minimization of the objective over the great circle with given axis."""
    axis = axis / np.linalg.norm(axis)
    u, w = _orth_pair(axis)
    phi = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    E = np.outer(np.cos(phi), u) + np.outer(np.sin(phi), w)
    vals = _objective_many(T, E)
    i = int(vals.argmin())
    lo, hi = phi[i] - 2.0 * np.pi / n, phi[i] + 2.0 * np.pi / n

    def f(p):
        e = math.cos(p) * u + math.sin(p) * w
        return float(np.arccos(np.clip(T @ e, -1.0, 1.0)).sum())

    p = _golden(f, lo, hi)
    return math.cos(p) * u + math.sin(p) * w


def _orth_pair(n):
    k = int(np.argmin(np.abs(n)))
    e = np.zeros(3)
    e[k] = 1.0
    u = e - np.dot(e, n) * n
    u /= np.linalg.norm(u)
    return u, np.cross(n, u)


def _golden(f, lo, hi, tol=1e-12):
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while abs(b - a) > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def steiner_valence4(config: TangentConfiguration) -> SteinerResult:
    """Candidate enumeration for four tangents.

    The minimizer is a tangent direction or an intersection of the great
    circles through disjoint pairs; degenerate pairings (an antipodal pair
    spans no unique circle, or the two circles coincide) contribute a
    one-parameter family handled by a 1-D scan.
    """
    T = config.directions
    if config.valence != 4:
        raise GeometryError("BAD_PARAMS", "steiner_valence4 needs exactly 4 directions")
    for i in range(4):
        for j in range(i + 1, 4):
            if float(T[i] @ T[j]) > 1.0 - 1e-12:
                raise GeometryError("DUPLICATE_DIRECTION",
                                    f"directions {i} and {j} coincide")
    candidates = list(T)
    pairings = [((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))]
    for (i, j), (k, m) in pairings:
        n1 = np.cross(T[i], T[j])
        n2 = np.cross(T[k], T[m])
        s1, s2 = np.linalg.norm(n1), np.linalg.norm(n2)
        if s1 < 1e-12 and s2 < 1e-12:
            continue  # both pairs antipodal: objective is constant on every circle
        if s1 < 1e-12:
            candidates.append(_circle_scan(T, n2))
            continue
        if s2 < 1e-12:
            candidates.append(_circle_scan(T, n1))
            continue
        x = np.cross(n1, n2)
        sx = np.linalg.norm(x)
        if sx < 1e-12:
            candidates.append(_circle_scan(T, n1))
            continue
        candidates.append(x / sx)
        candidates.append(-x / sx)
    e0, best = _pick_best(T, candidates)
    return _result(config, e0, best, VALENCE4_CANDIDATES,
                   {"candidates": len(candidates)})


def _seeded_sphere_points(n, seed):
    """Quasi-uniform points: a Fibonacci set under a seeded random rotation."""
    base = _fibonacci_grid(n)
    rng = np.random.default_rng(seed)
    q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return base @ q.T


def steiner_general(config: TangentConfiguration, seed: int = 0) -> SteinerResult:
    """Multistart projected subgradient descent for any valence."""
    T = config.directions
    starts = list(T)
    d = config.valence
    for i in range(d):
        for j in range(i + 1, d):
            m = T[i] + T[j]
            nm = np.linalg.norm(m)
            if nm > 1e-9:
                starts.append(m / nm)
    starts.extend(_seeded_sphere_points(32, seed))
    E, f = _descent_batch(T, starts)
    best = f.min()
    ties = E[f <= best + 1e-12]
    e0 = _lex_min(ties)
    val = angle_objective(config, e0)
    return _result(config, e0, val, GENERAL_DESCENT,
                   {"restarts": len(starts), "residual": _subgradient_norm(T, e0)})


def _subgradient_norm(T, e):
    dots = np.clip(T @ e, -1.0, 1.0)
    rej = T - dots[:, None] * e
    sin = np.linalg.norm(rej, axis=1)
    ok = sin > 1e-12
    xi = np.zeros_like(rej)
    xi[ok] = rej[ok] / sin[ok, None]
    return float(np.linalg.norm(xi.sum(axis=0)))


def _fibonacci_grid(n, dtype=np.float64):
    key = (n, np.dtype(dtype).str)
    if key not in _GRID_CACHE:
        i = np.arange(n, dtype=np.float64)
        golden = (1.0 + math.sqrt(5.0)) / 2.0
        z = 1.0 - (2.0 * i + 1.0) / n
        theta = 2.0 * np.pi * i / golden
        r = np.sqrt(np.maximum(1.0 - z * z, 0.0))
        pts = np.stack([r * np.cos(theta), r * np.sin(theta), z], axis=1)
        if len(_GRID_CACHE) > 8:
            _GRID_CACHE.clear()
        _GRID_CACHE[key] = pts.astype(dtype)
    return _GRID_CACHE[key]


def _fibonacci_point(i, n):
    golden = (1.0 + math.sqrt(5.0)) / 2.0
    z = 1.0 - (2.0 * i + 1.0) / n
    theta = 2.0 * np.pi * i / golden
    r = math.sqrt(max(1.0 - z * z, 0.0))
    return np.array([r * math.cos(theta), r * math.sin(theta), z])


def steiner_grid_oracle(config: TangentConfiguration, resolution: float) -> SteinerResult:
    """Exhaustive Fibonacci-grid minimum plus one descent polish.

    The grid's covering radius is at most `resolution`, so the grid minimum is
    within valence * resolution of the true minimum (each angle term is
    1-Lipschitz); the polish can only improve on that.
    """
    if not (0.0 < resolution <= 0.1):
        raise GeometryError("BAD_PARAMS", "grid resolution must lie in (0, 0.1]")
    T = config.directions
    n = int(math.ceil((GRID_COVER_CONSTANT / resolution) ** 2))
    g32 = _fibonacci_grid(n, np.float32)
    t32 = T.astype(np.float32)
    best_val = np.inf
    best_idx = 0
    chunk = 262144
    for s in range(0, n, chunk):
        vals = np.arccos(np.clip(g32[s:s + chunk] @ t32.T, -1.0, 1.0)).sum(axis=1)
        j = int(vals.argmin())
        if float(vals[j]) < best_val:
            best_val = float(vals[j])
            best_idx = s + j
    seed = _fibonacci_point(best_idx, n)
    E, f = _descent_batch(T, [seed])
    cands = np.array([seed, E[0]])
    e0, best = _pick_best(T, cands)
    return _result(config, e0, best, GRID_ORACLE,
                   {"grid_points": n, "resolution": float(resolution)})


def _r0_gap(beta):
    return 4.0 * math.asin(0.5 * math.sqrt(3.0) * math.sin(beta)) - 3.0 * beta


def solve_r0() -> float:
    """Circumradius at which the two closed-form branches of the equilateral
    vertex contribution meet, by bisection to 1e-12."""
    lo, hi = 0.5, math.pi / 2.0
    glo = _r0_gap(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        gm = _r0_gap(mid)
        if glo * gm <= 0.0:
            hi = mid
        else:
            lo, glo = mid, gm
        if hi - lo < 1e-12:
            break
    return 0.5 * (lo + hi)


def equilateral_tc(beta):
    """Closed-form vertex contribution for an equilateral triple of circumradius beta."""
    r0 = solve_r0()
    if beta <= r0:
        return 3.0 * (math.pi / 2.0 - beta)
    return 1.5 * math.pi - 4.0 * math.asin(0.5 * math.sqrt(3.0) * math.sin(beta))


def steiner_valence2(config: TangentConfiguration) -> SteinerResult:
    """Closed form for two tangents: the exterior angle pi - angle(T1, T2)."""
    T = config.directions
    theta = float(np.arccos(np.clip(T[0] @ T[1], -1.0, 1.0)))
    cands = [T[0], T[1]]
    m = T[0] + T[1]
    nm = np.linalg.norm(m)
    if nm > 1e-12:
        cands.append(m / nm)
    e0, _ = _pick_best(T, cands)
    return _result(config, e0, theta, VALENCE2_EXACT, {"candidates": len(cands)})


def solve_config(config: TangentConfiguration, seed: int = 0,
                 debug: bool = False) -> SteinerResult:
    """Dispatch on valence to the appropriate solver."""
    d = config.valence
    if d == 2:
        return steiner_valence2(config)
    if d == 3:
        return steiner_valence3(config)
    if d == 4:
        try:
            return steiner_valence4(config)
        except GeometryError as e:
            if e.code != "DUPLICATE_DIRECTION":
                raise
            res = steiner_general(config, seed)
            cert = dict(res.certificate, fallback="duplicate directions")
            return _result(config, res.e0, res.angle_sum, GENERAL_DESCENT, cert)
    res = steiner_general(config, seed)
    if debug:
        oracle = steiner_grid_oracle(config, 0.005)
        slack = d * 0.005 + 1e-9
        if res.angle_sum > oracle.angle_sum + slack:
            raise GeometryError("DESCENT_ORACLE_MISMATCH",
                                f"descent {res.angle_sum} vs oracle {oracle.angle_sum}")
    return res


def vertex_tc(graph: EmbeddedGraph, vertex_id: str, seed: int = 0,
              debug: bool = False) -> SteinerResult:
    """Vertex contribution to total curvature, in the vertex's tangent frame."""
    tangents = vertex_tangents(graph, vertex_id)
    coords = spaces.tangent_coords(graph.space, graph.vertex(vertex_id).position,
                                   tangents)
    coords = coords / np.linalg.norm(coords, axis=1, keepdims=True)
    return solve_config(TangentConfiguration(coords), seed=seed, debug=debug)
