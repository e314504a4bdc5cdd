import math
from fractions import Fraction

import numpy as np
import pytest

from helisphere import (CatenaryParams, SmallCircleParams, catenary, closure_function,
                        closure_residual, great_circle, momentum_of_samples, parallel,
                        small_circle, solve_beta_for_rotation)
from helisphere.errors import DomainError, RangeError


def _momentum(curve, n=101):
    smp = curve.sample(n)
    return smp, momentum_of_samples((smp.pos, smp.tan))


def test_great_circle_through_pole():
    curve = great_circle(0.5 * math.pi)
    smp, K = _momentum(curve)
    np.testing.assert_allclose(smp.pos[:, 0], np.cos(smp.s), atol=1e-14)
    np.testing.assert_allclose(smp.pos[:, 1], 0.0, atol=1e-14)
    np.testing.assert_allclose(smp.pos[:, 2], np.sin(smp.s), atol=1e-14)
    np.testing.assert_allclose(K, 0.0, atol=1e-14)


@pytest.mark.parametrize("theta,K", [(math.pi / 3, -0.5), (2 * math.pi / 3, 0.5)])
def test_great_circle_momentum(theta, K):
    _, Ks = _momentum(great_circle(theta))
    np.testing.assert_allclose(Ks, K, atol=1e-13)


def test_parallels():
    smp, K = _momentum(parallel(math.pi / 4))
    np.testing.assert_allclose(smp.z, 1 / math.sqrt(2), atol=1e-15)
    _, K = _momentum(parallel(math.pi / 6))
    np.testing.assert_allclose(K, -math.sqrt(3) / 2, atol=1e-14)
    with pytest.raises(DomainError):
        parallel(0.5 * math.pi)


def test_small_circle_unit_height_formula():
    curve = small_circle(SmallCircleParams(1.0, 0.0))
    smp = curve.sample(201)
    np.testing.assert_allclose(smp.z, np.sin(math.sqrt(2) * smp.s) / math.sqrt(2), atol=1e-14)
    assert smp.z.max() == pytest.approx(1 / math.sqrt(2), abs=1e-6)
    np.testing.assert_allclose(np.linalg.norm(smp.tan, axis=1), 1.0, atol=1e-9)


@pytest.mark.parametrize("delta", [0.3, 0.8, 1.4])
def test_orthogonal_small_circle_lies_in_plane(delta):
    curve = small_circle(SmallCircleParams(math.sinh(delta), 0.0))
    smp, K = _momentum(curve, 81)
    # Every point satisfies <pos, n> = tanh(delta) for a horizontal unit n.
    v, *_ = np.linalg.lstsq(smp.pos, np.ones(len(smp.s)), rcond=None)
    n = v / np.linalg.norm(v)
    np.testing.assert_allclose(smp.pos @ n, math.tanh(delta), atol=1e-8)
    assert abs(n[2]) < 1e-8
    np.testing.assert_allclose(K, math.sinh(delta) * smp.z, atol=1e-10)


def test_small_circle_tangent_to_equator():
    k0 = 0.7
    smp = small_circle(SmallCircleParams(k0, -1.0)).sample(2001)
    assert smp.z.min() == pytest.approx(0.0, abs=1e-6)
    assert np.all(smp.z >= -1e-15)
    with pytest.raises(DomainError):
        small_circle(SmallCircleParams(k0, 1.0))


@pytest.mark.parametrize("beta", [0.2, 0.9, 1.5])
def test_catenary_heights(beta):
    curve = catenary(CatenaryParams(beta), s_span=(0.0, 1.0))
    smp = curve.at([0.0, 0.25 * math.pi])
    assert smp.z[0] == pytest.approx(1 / math.sqrt(2), abs=1e-15)
    assert smp.z[1] == pytest.approx(math.cos(0.5 * beta), abs=1e-14)
    smp, K = _momentum(curve)
    np.testing.assert_allclose(K, -0.5 * math.sin(beta) / smp.z, atol=1e-9)


def test_catenary_limit_is_clifford_parallel():
    smp = catenary(CatenaryParams(0.5 * math.pi - 1e-7)).sample(101)
    np.testing.assert_allclose(smp.z, 1 / math.sqrt(2), atol=1e-7)


def test_closure_function_limits():
    assert closure_function(1e-6) == pytest.approx(0.5, abs=1e-3)
    assert closure_function(0.5 * math.pi - 1e-6) == pytest.approx(math.sqrt(2) / 2, abs=1e-3)


@pytest.mark.parametrize("q", ["2/3", "3/5"])
def test_closed_catenaries(q):
    params = solve_beta_for_rotation(q)
    assert abs(closure_function(params.beta) - float(Fraction(q))) < 1e-10
    assert closure_residual(params, q) < 1e-7


def test_solver_range_errors():
    for q in (0.45, 0.75, "1/2"):
        with pytest.raises(RangeError):
            solve_beta_for_rotation(q)


def test_catenary_beta_domain():
    for b in (0.0, 0.5 * math.pi, -0.1):
        with pytest.raises(DomainError):
            CatenaryParams(b)
