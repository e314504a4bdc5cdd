import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from helisphere import (CatenaryParams, CheckReport, HelicoidalSurface, MomentumProfile,
                        SmallCircleParams, brendle_kusner_check, catenary, fd_forms, forms,
                        great_circle, intrinsic_gauss, otsuki_check, parallel, reconstruct_curve,
                        small_circle)
from helisphere.errors import DomainError
from helisphere.oracles import clifford_brendle_kusner_residual


@pytest.mark.parametrize("h", [0.3, 1.0, 2.5])
def test_lawson_helicoid_fd_is_minimal(h):
    surf = HelicoidalSurface(h, great_circle(0.5 * math.pi))
    for s, t in [(0.3, 0.1), (0.9, 2.0), (1.3, 4.0)]:
        assert abs(fd_forms(surf, s, t).H) < 1e-5


def test_clifford_torus_is_flat():
    surf = HelicoidalSurface(1.0, parallel(math.pi / 4))
    assert abs(fd_forms(surf, 0.7, 1.3).K_G) < 1e-4
    assert abs(intrinsic_gauss(surf, 0.7, 1.3)) < 1e-4


def test_fd_step_domain():
    surf = HelicoidalSurface(0.5, great_circle(1.0))
    with pytest.raises(DomainError):
        fd_forms(surf, 0.5, 0.5, step=1e-8)


def test_intrinsic_gauss_examples():
    assert intrinsic_gauss(HelicoidalSurface(0.0, great_circle(0.5 * math.pi)), 0.8, 0.3) == \
        pytest.approx(1.0, abs=1e-4)
    curve = catenary(CatenaryParams(0.9))
    surf = HelicoidalSurface(0.0, curve)
    for s in (0.3, 1.0, 2.2):
        assert intrinsic_gauss(surf, s, 0.5) == pytest.approx(1.0 + forms(surf, s).K_ext, abs=1e-4)
        assert intrinsic_gauss(HelicoidalSurface(1.0, curve), s, 0.5) == pytest.approx(0.0, abs=1e-4)


def test_otsuki_half():
    r = otsuki_check(0.5)
    assert r.details["c"] == pytest.approx(0.5 * math.sqrt(0.75), rel=1e-15)
    assert r.details["c"] == pytest.approx(0.5 * math.sin(math.pi / 3), rel=1e-15)
    assert r.details["first_integral_drift"] < 1e-8
    assert r.details["momentum_residual"] < 1e-7


def test_otsuki_clifford_limit():
    h0 = 1 / math.sqrt(2)
    r = otsuki_check(h0, span=(0.0, 3.0))
    assert r.details["c"] == pytest.approx(0.5, rel=1e-15)
    assert r.details["first_integral_drift"] < 1e-12


def test_otsuki_domain():
    with pytest.raises(DomainError):
        otsuki_check(0.8)
    with pytest.raises(DomainError):
        otsuki_check(0.0)


def test_brendle_kusner():
    assert brendle_kusner_check(math.pi / 4).max_residual < 1e-5
    assert clifford_brendle_kusner_residual(1.0) == 0.0
    bad = brendle_kusner_check(math.pi / 4, C=1.1 * math.sin(math.pi / 4))
    assert bad.max_residual > 0.1
    assert not bad.passed
    # A wrong constant leaves the predicted offset 4/sin^2 - 4/C^2.
    expected = 4 / math.sin(math.pi / 4) ** 2 * (1 - 1 / 1.21)
    assert bad.max_residual == pytest.approx(expected, rel=1e-4)


def _family(kind, u):
    if kind == 0:
        return great_circle(0.3 + 1.0 * u)
    if kind == 1:
        return small_circle(SmallCircleParams(0.2 + u, -0.1))
    if kind == 2:
        return catenary(CatenaryParams(0.2 + 1.2 * u))
    p = MomentumProfile.minimal_helicoidal(0.5 + u, 0.1 + 0.3 * u)
    return reconstruct_curve(p, (0.0, 1.5), sum(p.domain) / 2)


@given(st.integers(0, 3), st.floats(0.0, 1.0), st.floats(0.0, 3.0), st.floats(0.15, 0.85),
       st.floats(0.0, 2 * math.pi))
def test_closed_forms_match_finite_differences(kind, u, h, frac, t):
    curve = _family(kind, u)
    a, b = curve.s_span
    s = a + frac * (b - a)
    surf = HelicoidalSurface(h, curve)
    exact = forms(surf, s)
    fd = fd_forms(surf, s, t)
    for name in ("g11", "g12", "g22", "s11", "s12", "s22", "H", "K_ext"):
        assert abs(getattr(fd, name) - getattr(exact, name)) < 1e-5, name


def test_check_report_pass_flag():
    assert CheckReport("a", 0.5, 1.0).passed
    assert not CheckReport("b", 1.0, 1.0).passed
    assert not CheckReport("c", float("nan"), 1.0).passed
    assert CheckReport("d", 0.1, 1.0).to_json()["pass"] is True
