import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from helisphere import (AssociatedParams, HelicoidParams, associated_from_params,
                        conjugate_pitches, isometry_pullback, isothermal_forms,
                        params_from_associated, verify_association)
from helisphere.associated import relation_residuals
from helisphere.errors import DomainError, PitchMismatchError


def test_theta_zero_is_catenoid():
    beta = 0.9
    hp = params_from_associated(AssociatedParams(beta, 0.0))
    assert hp.h == pytest.approx(0.0, abs=1e-15)
    assert hp.c == pytest.approx(0.5 * math.sin(beta), rel=1e-14)


def test_theta_half_pi_is_conjugate_helicoid():
    beta = 1.1
    hp = params_from_associated(AssociatedParams(beta, 0.5 * math.pi))
    assert hp.h == pytest.approx(math.tan(0.5 * beta), abs=1e-12)
    assert hp.c == pytest.approx(0.0, abs=1e-12)


def test_worked_parameters():
    # h solves u h^2 - h + u = 0 with u = sin(beta) sin(theta) / 2 (smaller root
    # for theta < pi/2); c then follows from the second relation.
    ap = AssociatedParams(math.pi / 3, math.pi / 4)
    hp = params_from_associated(ap)
    u = 0.5 * math.sin(ap.beta) * math.sin(ap.theta)
    h = (1 - math.sqrt(1 - 4 * u * u)) / (2 * u)
    assert hp.h == pytest.approx(h, rel=1e-14)
    # Reference values are truncated to five decimals.
    assert hp.h == pytest.approx(0.34200, abs=1e-5)
    assert hp.c == pytest.approx(0.38729, abs=1e-5)
    assert max(relation_residuals(ap, hp)) < 1e-12


@given(st.floats(0.05, 0.5 * math.pi), st.floats(0.0, math.pi - 0.05))
def test_parameter_round_trip(beta, theta):
    ap = AssociatedParams(beta, theta)
    try:
        hp = params_from_associated(ap)
    except DomainError:
        # Only the Clifford point beta = theta = pi/2 is excluded here.
        assert abs(beta - 0.5 * math.pi) < 1e-9 and abs(theta - 0.5 * math.pi) < 1e-6
        return
    assert max(relation_residuals(ap, hp)) < 1e-12
    if hp.c > 0.0:
        back = associated_from_params(hp)
        assert back.beta == pytest.approx(beta, abs=1e-9)
        assert back.theta == pytest.approx(theta, abs=1e-9)


def test_associated_from_params_examples():
    ap = associated_from_params(HelicoidParams(0.0, 0.3))
    assert ap.beta == pytest.approx(math.asin(0.6), rel=1e-15)
    assert ap.theta == 0.0
    beta = 0.7
    ap = associated_from_params(HelicoidParams(1 / math.tan(0.5 * beta), 0.0))
    assert ap.theta == pytest.approx(0.5 * math.pi, abs=1e-15)
    assert ap.beta == pytest.approx(beta, abs=1e-14)


def test_conjugate_pitches():
    lo, hi = conjugate_pitches(math.pi / 3)
    assert (lo, hi) == pytest.approx((1 / math.sqrt(3), math.sqrt(3)), rel=1e-14)
    lo, hi = conjugate_pitches(0.5 * math.pi - 1e-9)
    assert lo == pytest.approx(1.0, abs=1e-8) and hi == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("beta", [math.pi / 6, math.pi / 4, math.pi / 3])
def test_isometry_pullback_both_pitches(beta):
    for h in conjugate_pitches(beta):
        r = isometry_pullback(beta, h)
        assert r.passed and r.max_residual < 1e-10


def test_isometry_pullback_rejects_other_pitch():
    beta = 0.8
    with pytest.raises(PitchMismatchError):
        isometry_pullback(beta, 2 * math.tan(0.5 * beta))


def test_isothermal_second_form_at_theta_zero():
    beta = 0.9
    f = isothermal_forms(AssociatedParams(beta, 0.0))
    np.testing.assert_allclose(f.s_xx, 0.5 * math.sin(beta), rtol=1e-15)
    np.testing.assert_allclose(f.s_xy, 0.0, atol=1e-15)
    np.testing.assert_allclose(f.s_yy, -0.5 * math.sin(beta), rtol=1e-15)
    np.testing.assert_allclose(f.g_xx, f.zt ** 2)


@pytest.mark.parametrize("theta", [0.0, 1e-6, 0.4, 1.2, 2.0, 2.9])
def test_verify_association(theta):
    r = verify_association(AssociatedParams(0.8, theta))
    assert r.passed and r.max_residual < 1e-6


def test_parameter_domain_errors():
    with pytest.raises(DomainError):
        AssociatedParams(0.0, 0.5)
    with pytest.raises(DomainError):
        AssociatedParams(0.5, -0.1)
    with pytest.raises(DomainError):
        params_from_associated(AssociatedParams(0.5, math.pi))
    with pytest.raises(DomainError):
        HelicoidParams(1.0, 0.2)
    with pytest.raises(DomainError):
        HelicoidParams(0.5, 0.5)
    with pytest.raises(DomainError):
        associated_from_params(HelicoidParams(0.0, 0.0))
