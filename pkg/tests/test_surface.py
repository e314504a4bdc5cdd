import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from helisphere import (CatenaryParams, HelicoidalSurface, MomentumProfile, SmallCircleParams,
                        area_density, catenary, extrinsic_and_gauss, fd_forms, first_form,
                        great_circle, immerse, mean_curvature, parallel,
                        principal_curvatures_rotational, reconstruct_curve, second_form,
                        small_circle, unit_normal)
from helisphere.errors import DegenerateError, PitchError

S = np.linspace(0.2, 1.3, 9)


def lawson(h):
    return HelicoidalSurface(h, great_circle(0.5 * math.pi))


def test_rotational_immersion():
    curve = catenary(CatenaryParams(0.7), s_span=(0.0, 1.0))
    X = immerse(HelicoidalSurface(0.0, curve), 0.4, 1.1)
    x, y, z = curve.at(0.4).pos[0]
    np.testing.assert_allclose(X, [x, y, z * math.cos(1.1), z * math.sin(1.1)], atol=1e-15)


def test_lawson_immersion_complex_form():
    h, s, t = 0.8, 0.9, 2.3
    X = immerse(lawson(h), s, t)
    w1 = math.cos(s) * np.exp(1j * h * t)
    w2 = math.sin(s) * np.exp(1j * t)
    np.testing.assert_allclose(X, [w1.real, w1.imag, w2.real, w2.imag], atol=1e-15)


@given(st.floats(0.0, 3.0), st.floats(0.05, 1.5), st.floats(-10, 10))
def test_immersion_on_unit_sphere(h, s, t):
    curve = small_circle(SmallCircleParams(0.6, 0.1))
    a, b = curve.s_span
    s = a + (b - a) * s / 1.55
    assert np.linalg.norm(immerse(HelicoidalSurface(h, curve), s, t)) == pytest.approx(1.0, abs=1e-14)


def test_first_forms():
    curve = small_circle(SmallCircleParams(0.6, 0.1))
    s = np.linspace(*curve.s_span, 11)[1:-1]
    g11, g12, g22 = first_form(HelicoidalSurface(0.0, curve), s)
    np.testing.assert_allclose(g11, 1.0)
    np.testing.assert_allclose(g12, 0.0)
    np.testing.assert_allclose(g22, curve.at(s).z ** 2, rtol=1e-14)
    h = 1.7
    g11, g12, g22 = first_form(lawson(h), S)
    np.testing.assert_allclose(g22, h * h * np.cos(S) ** 2 + np.sin(S) ** 2, rtol=1e-14)
    np.testing.assert_allclose(g12, 0.0, atol=1e-15)
    beta = 0.8
    _, _, g22 = first_form(HelicoidalSurface(0.0, catenary(CatenaryParams(beta))), S)
    np.testing.assert_allclose(g22, (1 + math.cos(beta) * np.sin(2 * S)) / 2, rtol=1e-13)


def test_area_density():
    curve = catenary(CatenaryParams(0.7))
    smp = curve.at(S)
    np.testing.assert_allclose(area_density(HelicoidalSurface(0.0, curve), S), smp.z, rtol=1e-14)
    K = -0.5 * math.sin(0.7) / smp.z
    np.testing.assert_allclose(area_density(HelicoidalSurface(1.0, curve), S), np.sqrt(1 - K * K),
                               rtol=1e-10)


def test_normal_of_totally_geodesic_sphere():
    nu = unit_normal(lawson(0.0), 0.5 * math.pi, 0.0)
    assert np.allclose(np.abs(nu), [0, 1, 0, 0], atol=1e-15)


@pytest.mark.parametrize("h", [0.0, 0.5, 2.0])
def test_normal_is_orthonormal_to_tangent_plane(h):
    curve = reconstruct_curve(MomentumProfile.linear(0.4, -0.2), (0.0, 1.0), 0.5)
    surf = HelicoidalSurface(h, curve)
    s, t, d = 0.4, 0.7, 1e-6
    nu = unit_normal(surf, s, t)
    X = immerse(surf, s, t)
    Xs = (immerse(surf, s + d, t) - immerse(surf, s - d, t)) / (2 * d)
    Xt = (immerse(surf, s, t + d) - immerse(surf, s, t - d)) / (2 * d)
    assert np.linalg.norm(nu) == pytest.approx(1.0, abs=1e-14)
    for v in (X, Xs, Xt):
        assert abs(nu @ v) < 1e-8


def test_lawson_second_form():
    h = 1.3
    surf = lawson(h)
    s11, s12, s22 = second_form(surf, S)
    np.testing.assert_allclose(s11, 0.0, atol=1e-15)
    np.testing.assert_allclose(s22, 0.0, atol=1e-15)
    np.testing.assert_allclose(s12, h / area_density(surf, S), rtol=1e-14)
    np.testing.assert_allclose(mean_curvature(surf, S), 0.0, atol=1e-15)


def test_umbilical_rotational_sphere():
    k0 = math.sinh(0.5)
    curve = small_circle(SmallCircleParams(k0, 0.0))
    s = np.linspace(*curve.s_span, 9)[1:-1]
    surf = HelicoidalSurface(0.0, curve)
    g11, _, g22 = first_form(surf, s)
    s11, s12, s22 = second_form(surf, s)
    np.testing.assert_allclose(s11 / g11, k0, rtol=1e-12)
    np.testing.assert_allclose(s22 / g22, k0, rtol=1e-12)
    np.testing.assert_allclose(s12, 0.0, atol=1e-15)
    np.testing.assert_allclose(mean_curvature(surf, s), k0, rtol=1e-12)
    Kext, KG = extrinsic_and_gauss(surf, s)
    np.testing.assert_allclose(Kext, k0 * k0, rtol=1e-12)
    np.testing.assert_allclose(principal_curvatures_rotational(surf, s), [[k0] * 7, [k0] * 7],
                               rtol=1e-12)


def test_catenoid_is_minimal_with_opposite_curvatures():
    beta = 1.1
    c = 0.5 * math.sin(beta)
    surf = HelicoidalSurface(0.0, catenary(CatenaryParams(beta)))
    np.testing.assert_allclose(mean_curvature(surf, S), 0.0, atol=1e-14)
    z = surf.profile.at(S).z
    k1, k2 = principal_curvatures_rotational(surf, S)
    np.testing.assert_allclose(k1, c / z ** 2, rtol=1e-13)
    np.testing.assert_allclose(k2, -c / z ** 2, rtol=1e-13)


@pytest.mark.parametrize("h", [0.3, 1.5, 3.0])
def test_minimal_helicoidal_is_minimal(h):
    p = MomentumProfile.minimal_helicoidal(h, 0.3)
    curve = reconstruct_curve(p, (0.0, 2.0), sum(p.domain) / 2)
    np.testing.assert_allclose(mean_curvature(HelicoidalSurface(h, curve), np.linspace(0, 2, 17)),
                               0.0, atol=1e-12)


def test_pitch_one_is_flat():
    curve = small_circle(SmallCircleParams(0.6, 0.1))
    s = np.linspace(*curve.s_span, 9)[1:-1]
    Kext, KG = extrinsic_and_gauss(HelicoidalSurface(1.0, curve), s)
    np.testing.assert_allclose(Kext, -1.0, atol=1e-13)
    np.testing.assert_allclose(KG, 0.0, atol=1e-13)


def test_totally_geodesic_sphere_curvatures():
    Kext, KG = extrinsic_and_gauss(lawson(0.0), S)
    np.testing.assert_allclose(Kext, 0.0, atol=1e-15)
    np.testing.assert_allclose(KG, 1.0, atol=1e-15)


@pytest.mark.parametrize("h", [0.0, 0.6, 2.2])
def test_closed_forms_against_finite_differences(h):
    curve = reconstruct_curve(MomentumProfile.linear(0.4, -0.2), (0.0, 1.0), 0.5)
    surf = HelicoidalSurface(h, curve)
    exact = [np.asarray(v) for v in (*first_form(surf, 0.45), *second_form(surf, 0.45))]
    f = fd_forms(surf, 0.45, 1.2)
    approx = [f.g11, f.g12, f.g22, f.s11, f.s12, f.s22]
    np.testing.assert_allclose(approx, exact, atol=1e-6)


def test_constant_height_and_pitch_errors():
    surf = HelicoidalSurface(0.0, parallel(0.5))
    with pytest.raises(DegenerateError):
        principal_curvatures_rotational(surf, 0.1)
    with pytest.raises(PitchError):
        principal_curvatures_rotational(lawson(0.5), 0.3)
