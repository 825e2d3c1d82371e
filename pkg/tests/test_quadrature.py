import math

import numpy as np
import pytest

from netcurv.quadrature import QuadratureConfig, integrate
from netcurv.spaces import GeometryError


def test_smooth_integrals():
    val, err = integrate(np.sin, 0.0, math.pi)
    assert abs(val - 2.0) < 1e-12
    assert abs(val - 2.0) <= max(err, 1e-12)
    val, _ = integrate(lambda t: np.exp(-t * t), 0.0, 1.0)
    assert abs(val - 0.7468241328124270) < 1e-12


def test_zero_integrand():
    val, err = integrate(lambda t: np.zeros_like(t))
    assert val == 0.0
    assert err == 0.0


def test_needs_refinement():
    # narrow bump: a single panel misses it badly, refinement recovers it
    val, _ = integrate(lambda t: np.exp(-((t - 0.37) / 0.01) ** 2), 0.0, 1.0,
                       QuadratureConfig(rel_tol=1e-10))
    exact = 0.01 * math.sqrt(math.pi)
    assert abs(val - exact) < 1e-11


def test_halving_tolerance_within_error_estimate():
    f = lambda t: np.sqrt(np.abs(t - 0.3) + 1e-6)
    v1, e1 = integrate(f, 0.0, 1.0, QuadratureConfig(rel_tol=1e-6))
    v2, _ = integrate(f, 0.0, 1.0, QuadratureConfig(rel_tol=5e-7))
    assert abs(v1 - v2) <= e1 + 1e-12


def test_nonconvergence_raises():
    f = lambda t: 1.0 / np.sqrt(np.abs(t - 1.0 / 3.0) + 1e-300)
    with pytest.raises(GeometryError) as err:
        integrate(f, 0.0, 1.0, QuadratureConfig(rel_tol=1e-9, max_subdivisions=20))
    assert err.value.code == "QUADRATURE_NONCONVERGED"


def test_config_validation():
    with pytest.raises(GeometryError):
        QuadratureConfig(rel_tol=0.5)
    with pytest.raises(GeometryError):
        QuadratureConfig(rel_tol=-1e-9)
