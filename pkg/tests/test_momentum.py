import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from helisphere import (MomentumProfile, ReconstructionConfig, arc_length_of_height,
                        curvature_from_momentum, eval_momentum, momentum_of_samples,
                        reconstruct_curve, z_period_and_rotation)
from helisphere.errors import DomainError, NoOscillationError


def test_eval_constant_and_catenary():
    th = 1.1
    assert eval_momentum(MomentumProfile.constant(-math.cos(th)), 0.4) == pytest.approx(
        (-math.cos(th), 0.0), abs=1e-15)
    c, z = 0.3, 0.6
    K, dK = eval_momentum(MomentumProfile.catenary(c), z)
    assert K == pytest.approx(-c / z, rel=1e-15)
    assert dK == pytest.approx(c / z ** 2, rel=1e-15)


def test_eval_linear():
    # z = 0.5 lies above the default band for k0 = 2, so widen the domain.
    K, dK = eval_momentum(MomentumProfile.linear(2.0, 0.0, domain=(0.0, 1.0)), 0.5)
    assert (K, dK) == pytest.approx((1.0, 2.0), abs=1e-15)
    with pytest.raises(DomainError):
        eval_momentum(MomentumProfile.linear(2.0, 0.0), 0.5)


def test_curvature_of_families():
    assert curvature_from_momentum(MomentumProfile.constant(0.2), 0.5) == pytest.approx(0.0, abs=1e-15)
    assert curvature_from_momentum(MomentumProfile.linear(0.7, 0.1), 0.3) == pytest.approx(0.7)
    assert curvature_from_momentum(MomentumProfile.catenary(0.3), 0.6) == pytest.approx(0.3 / 0.36)


def test_arc_length_of_height():
    z = 0.7
    assert arc_length_of_height(MomentumProfile.constant(0.0), 0.0, z) == pytest.approx(
        math.asin(z), abs=1e-10)
    c = 0.6
    assert arc_length_of_height(MomentumProfile.constant(c), 0.0, math.sqrt(1 - c * c)) == pytest.approx(
        0.5 * math.pi, abs=1e-9)
    beta = 1.0
    L = arc_length_of_height(MomentumProfile.catenary(0.5 * math.sin(beta)),
                             math.sin(0.5 * beta), math.cos(0.5 * beta))
    assert L == pytest.approx(0.5 * math.pi, abs=1e-9)


def test_reconstruct_great_circle():
    c = 0.4
    curve = reconstruct_curve(MomentumProfile.constant(c), (0.0, 1.2), 0.0, 1)
    s = np.linspace(0.0, 1.2, 50)
    smp = curve.at(s)
    np.testing.assert_allclose(smp.z, math.sqrt(1 - c * c) * np.sin(s), atol=1e-9)
    np.testing.assert_allclose(smp.lam - smp.lam[0], -np.arctan(c * np.tan(s)), atol=1e-8)


def test_reconstruct_catenary_height():
    beta = 0.9
    curve = reconstruct_curve(MomentumProfile.catenary(0.5 * math.sin(beta)), (0.0, 3.0),
                              1.0 / math.sqrt(2.0), 1)
    smp = curve.sample(301)
    np.testing.assert_allclose(smp.z, np.sqrt((1 + math.cos(beta) * np.sin(2 * smp.s)) / 2), atol=1e-8)
    assert np.all(smp.z > math.sin(beta / 2) - 1e-12)
    assert np.all(smp.z < math.cos(beta / 2) + 1e-12)


def test_reconstruct_orthogonal_small_circle():
    d = 0.6
    curve = reconstruct_curve(MomentumProfile.linear(math.sinh(d), 0.0), (0.0, 1.5), 0.0, 1)
    smp = curve.sample(151)
    np.testing.assert_allclose(smp.z, np.sin(math.cosh(d) * smp.s) / math.cosh(d), atol=1e-8)
    K = momentum_of_samples((smp.pos, smp.tan))
    np.testing.assert_allclose(K, math.tanh(d) * np.sin(math.cosh(d) * smp.s), atol=1e-8)


def test_reconstructed_curve_is_unit_speed_on_sphere():
    curve = reconstruct_curve(MomentumProfile.minimal_helicoidal(0.5, 0.3), (0.0, 3.0), 0.6)
    smp = curve.sample(200)
    np.testing.assert_allclose(np.linalg.norm(smp.pos, axis=1), 1.0, atol=1e-12)
    np.testing.assert_allclose(np.linalg.norm(smp.tan, axis=1), 1.0, atol=1e-10)
    np.testing.assert_allclose(np.einsum("ij,ij->i", smp.pos, smp.tan), 0.0, atol=1e-10)


def test_momentum_of_samples_examples():
    s = np.linspace(0.0, 3.0, 7)
    pos = np.stack([np.cos(s), 0 * s, np.sin(s)], axis=1)
    tan = np.stack([-np.sin(s), 0 * s, np.cos(s)], axis=1)
    np.testing.assert_allclose(momentum_of_samples((pos, tan)), 0.0, atol=1e-15)
    assert momentum_of_samples(([[1.0, 0, 0]], [[0, 1.0, 0]]))[0] == pytest.approx(-1.0)
    # Parallel at height sin(phi) traversed with increasing longitude.
    phi = 0.4
    lam = np.linspace(0, 6, 9)
    pos = np.stack([np.cos(phi) * np.cos(lam), np.cos(phi) * np.sin(lam), np.full_like(lam, np.sin(phi))], 1)
    tan = np.stack([-np.sin(lam), np.cos(lam), 0 * lam], 1)
    np.testing.assert_allclose(momentum_of_samples((pos, tan)), -math.cos(phi), atol=1e-14)


def test_z_period_catenary_and_no_oscillation():
    beta = 0.8
    S, _ = z_period_and_rotation(MomentumProfile.catenary(0.5 * math.sin(beta)))
    assert S == pytest.approx(math.pi, abs=1e-9)
    with pytest.raises(NoOscillationError):
        z_period_and_rotation(MomentumProfile.constant(0.3))


def test_z_period_minimal_matches_ode():
    p = MomentumProfile.minimal_helicoidal(0.5, 0.3)
    S, dlam = z_period_and_rotation(p)
    assert S > 0 and dlam > 0
    lo, hi = p.domain
    curve = reconstruct_curve(p, (0.0, 3 * S), 0.5 * (lo + hi), 1,
                              ReconstructionConfig(rtol=1e-12, atol=1e-13))
    tp = np.array(curve.turning_points)
    assert len(tp) >= 3
    # Successive turning points alternate between minima and maxima.
    assert tp[2] - tp[0] == pytest.approx(S, abs=1e-8)


@given(st.floats(0.05, 0.45), st.floats(0.0, 3.0))
def test_minimal_validity_endpoints(c, h):
    lo, hi = MomentumProfile.minimal_helicoidal(h, c).domain
    for z in (lo, hi):
        assert z ** 4 + c * c == pytest.approx(z * z, abs=1e-12)


@given(st.floats(-0.9, 0.9), st.floats(0.05, 0.95))
def test_constant_sign_symmetry(c, z):
    # Reversing the momentum mirrors the longitude and keeps the height.
    z = z * math.sqrt(1 - c * c)
    a = reconstruct_curve(MomentumProfile.constant(c), (0.0, 0.5), z)
    b = reconstruct_curve(MomentumProfile.constant(-c), (0.0, 0.5), z)
    sa, sb = a.sample(11), b.sample(11)
    np.testing.assert_allclose(sa.z, sb.z, atol=1e-9)
    np.testing.assert_allclose(sa.lam - sa.lam[0], -(sb.lam - sb.lam[0]), atol=1e-9)


def test_bad_inputs():
    with pytest.raises(DomainError):
        reconstruct_curve(MomentumProfile.constant(0.5), (0.0, 1.0), 0.95)
    with pytest.raises(DomainError):
        MomentumProfile.catenary(0.6)
