"""Closed-form profile curves: great circles, parallels, small circles, catenaries.

Also the closure analysis of spherical catenaries: ``T(beta)`` is the longitude
advance per height period divided by ``2 pi``, and a catenary closes exactly
when ``T(beta)`` is rational.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import brentq

from ._backend import kernels
from .errors import ConvergenceError, DomainError, RangeError, ToleranceError
from .momentum import MomentumProfile, ProfileCurve, frame_from_height

T_LOWER = 0.5
T_UPPER = math.sqrt(2.0) / 2.0

# Quadrature tolerances for the catenary longitude.
LAMBDA_RTOL = 1e-13
LAMBDA_ATOL = 1e-15


@dataclass(frozen=True)
class CatenaryParams:
    """Spherical catenary parameter ``beta`` in ``(0, pi/2)``; ``c = sin(beta)/2``."""

    beta: float

    def __post_init__(self):
        if not (0.0 < self.beta < 0.5 * math.pi):
            raise DomainError(f"beta must lie in (0, pi/2), got {self.beta}")

    @property
    def c(self) -> float:
        return 0.5 * math.sin(self.beta)


@dataclass(frozen=True)
class SmallCircleParams:
    """Small circle with momentum ``K = k0 z + c``; needs ``|c| < sqrt(1 + k0^2)``."""

    k0: float
    c: float

    def __post_init__(self):
        if self.k0 < 0.0:
            raise DomainError("k0 must be non-negative")
        if abs(self.c) >= math.sqrt(1.0 + self.k0 ** 2):
            raise DomainError(f"|c| must be below sqrt(1 + k0^2), got c={self.c}, k0={self.k0}")


def _unit_span(s_span, lo, hi):
    if s_span is None:
        return lo, hi
    a, b = float(s_span[0]), float(s_span[1])
    if not (lo - 1e-12 <= a < b <= hi + 1e-12):
        raise DomainError(f"s_span must lie inside [{lo:.12g}, {hi:.12g}]")
    return a, b


def great_circle(theta: float, s_span=None, n_samples=513) -> ProfileCurve:
    """Great semicircle ``(cos s, cos(theta) sin s, sin(theta) sin s)`` on ``(0, pi)``.

    Its momentum is the constant ``-cos(theta)``. For ``theta = pi/2`` the
    curve passes over the pole and its longitude jumps by ``pi`` there.
    """
    theta = float(theta)
    if not (0.0 < theta < math.pi):
        raise DomainError(f"theta must lie in (0, pi), got {theta}")
    ct, st = math.cos(theta), math.sin(theta)
    span = _unit_span(s_span, 0.0, math.pi)

    def evaluator(s):
        cs, ss = np.cos(s), np.sin(s)
        pos = np.stack([cs, ct * ss, st * ss], axis=-1)
        tan = np.stack([-ss, ct * cs, st * cs], axis=-1)
        lam = np.arctan2(ct * ss, cs)
        return pos, tan, lam

    p = MomentumProfile.constant(-ct, domain=(0.0, st))
    return ProfileCurve(p, span, evaluator, turning_points=(0.5 * math.pi,),
                        n_samples=n_samples, name=f"great circle theta={theta:.6g}")


def parallel(phi0: float, s_span=None, n_samples=513) -> ProfileCurve:
    """The parallel at latitude ``phi0``: ``z = sin(phi0)``, ``lam = s / cos(phi0)``.

    The height is constant, so the momentum ``-cos(phi0)`` is not a function
    of ``z``; the curve is flagged degenerate and the closed-form curvature
    layer refuses it.
    """
    phi0 = float(phi0)
    if not (0.0 < phi0 < 0.5 * math.pi):
        raise DomainError(f"phi0 must lie in (0, pi/2), got {phi0}")
    z0, r0 = math.sin(phi0), math.cos(phi0)
    span = (0.0, 2.0 * math.pi * r0) if s_span is None else (float(s_span[0]), float(s_span[1]))

    def evaluator(s):
        lam = s / r0
        cl, sl = np.cos(lam), np.sin(lam)
        pos = np.stack([r0 * cl, r0 * sl, np.full_like(s, z0)], axis=-1)
        tan = np.stack([-sl, cl, np.zeros_like(s)], axis=-1)
        return pos, tan, lam

    p = MomentumProfile.constant(-r0, domain=(z0, z0))
    return ProfileCurve(p, span, evaluator, degenerate=True, n_samples=n_samples,
                        name=f"parallel phi0={phi0:.6g}")


def _small_circle_longitude(k0, c, s):
    """Continuous longitude of the small circle, up to an additive constant.

    Each ``arctan(N(u)/d)`` term with ``u = tan(w s / 2)`` jumps by ``pi``
    whenever ``u`` passes a pole; adding ``pi`` per pole crossing with the
    sign of the jump keeps the sum continuous.
    """
    w2 = 1.0 + k0 * k0
    w = math.sqrt(w2)
    R = math.sqrt(w2 - c * c)
    half = 0.5 * w * s
    u = np.tan(half)
    crossings = np.floor((half + 0.5 * math.pi) / math.pi)
    if c == k0 or c == -k0:
        b = -(1.0 + 2.0 * k0 * k0) if c == k0 else (1.0 + 2.0 * k0 * k0)
        d = 2.0 * k0 * w
        return np.arctan((1.0 + b * u) / d) + math.copysign(math.pi, b / d) * crossings
    terms = (
        # (weight, constant, slope, denominator)
        (1.0, R, 1.0 - c * k0 + k0 * k0, (k0 - c) * w),
        (-1.0, -R, 1.0 + c * k0 + k0 * k0, (k0 + c) * w),
    )
    lam = np.zeros_like(s)
    for eps, a, b, d in terms:
        lam = lam + eps * (np.arctan((a + b * u) / d) + math.copysign(math.pi, b / d) * crossings)
    return lam


def small_circle_height(k0, c, s):
    """``z(s) = (R sin(w s) - c k0) / w^2`` with ``w = sqrt(1 + k0^2)``, ``R = sqrt(w^2 - c^2)``."""
    w2 = 1.0 + k0 * k0
    return (math.sqrt(w2 - c * c) * np.sin(math.sqrt(w2) * s) - c * k0) / w2


def small_circle(params: SmallCircleParams, s_span=None, n_samples=513) -> ProfileCurve:
    """Small circle of geodesic curvature ``k0`` with momentum ``k0 z + c``.

    The default arc-length range is the part of one period where ``z > 0``
    (the whole period when the circle stays in the upper hemisphere). The
    longitude is closed-form and continuous; its additive constant is chosen
    so that ``lam = 0`` at the start of the default range.
    """
    k0, c = float(params.k0), float(params.c)
    if k0 == 0.0:
        raise DomainError("small_circle needs k0 > 0; use great_circle for k0 = 0")
    w2 = 1.0 + k0 * k0
    w = math.sqrt(w2)
    R = math.sqrt(w2 - c * c)
    a = c * k0 / R
    if a >= 1.0:
        raise DomainError("small circle lies entirely in z <= 0")
    if a <= -1.0:
        # z > 0 everywhere; one full period, starting at the lowest point.
        lo = -0.5 * math.pi / w
        hi = lo + 2.0 * math.pi / w
    else:
        lo = math.asin(a) / w
        hi = (math.pi - math.asin(a)) / w
    span = (lo, hi) if s_span is None else (float(s_span[0]), float(s_span[1]))
    lam0 = float(_small_circle_longitude(k0, c, np.array([span[0]]))[0])
    pole_s = 0.5 * math.pi / w if c == -k0 else None

    def frame(s):
        z = small_circle_height(k0, c, s)
        zdot = R * np.cos(w * s) / w
        lam = _small_circle_longitude(k0, c, s) - lam0
        if pole_s is not None:
            # The circle runs over the pole, where the longitude jumps by pi.
            period = 2.0 * math.pi / w
            lam = lam + math.pi * (np.floor((s - pole_s) / period)
                                   - np.floor((span[0] - pole_s) / period))
        pos, tan = frame_from_height(z, zdot, lam, k0 * z + c)
        return pos, tan, lam

    def evaluator(s):
        pos, tan, lam = frame(s)
        bad = ~np.all(np.isfinite(tan), axis=1)
        if np.any(bad):
            # Exactly on the pole the polar frame is 0/0; the tangent is the
            # mean of its neighbours, accurate to O(delta^2).
            delta = 1e-6
            tp = frame(s[bad] + delta)[1]
            tm = frame(s[bad] - delta)[1]
            t_mid = 0.5 * (tp + tm)
            tan[bad] = t_mid / np.linalg.norm(t_mid, axis=1)[:, None]
            pos[bad] = np.array([0.0, 0.0, 1.0])
        return pos, tan, lam

    p = MomentumProfile.linear(k0, c)
    tps = [t for t in (0.5 * math.pi / w, -0.5 * math.pi / w, 1.5 * math.pi / w)
           if span[0] < t < span[1]]
    return ProfileCurve(p, span, evaluator, turning_points=tps, n_samples=n_samples,
                        name=f"small circle k0={k0:.6g} c={c:.6g}")


# -- catenaries --------------------------------------------------------------


def catenary_height(beta, s):
    """``z(s) = sqrt((1 + cos(beta) sin(2 s)) / 2)``."""
    return np.sqrt(0.5 * (1.0 + math.cos(beta) * np.sin(2.0 * np.asarray(s, dtype=float))))


def _lambda_segment(beta, a, b):
    val, err, ok = kernels.catenary_lambda(beta, a, b, LAMBDA_RTOL, LAMBDA_ATOL)
    if not ok:
        raise ToleranceError(f"catenary longitude quadrature did not converge on [{a}, {b}]")
    return val


def catenary_longitude(beta, s, periodic=True):
    """Longitude ``lam(s)`` of the catenary with ``lam(0) = 0``.

    With ``periodic`` the integral is split as
    ``floor(s/pi) * lam(pi) + lam(s mod pi)``; otherwise each value is
    integrated directly from 0.
    """
    s = np.atleast_1d(np.asarray(s, dtype=float))
    out = np.empty_like(s)
    if not periodic:
        for i, v in enumerate(s):
            out[i] = _lambda_segment(beta, 0.0, v)
        return out
    full = _lambda_segment(beta, 0.0, math.pi)
    k = np.floor(s / math.pi)
    r = s - k * math.pi
    order = np.argsort(r)
    acc = 0.0
    prev = 0.0
    rem = np.empty_like(r)
    for i in order:
        acc += _lambda_segment(beta, prev, r[i])
        prev = r[i]
        rem[i] = acc
    out[:] = k * full + rem
    return out


def catenary(params: CatenaryParams, s_span=(0.0, math.pi), n_samples=513) -> ProfileCurve:
    """The spherical catenary with momentum ``-sin(beta) / (2 z)``.

    Height is closed-form; longitude comes from adaptive quadrature in ``s``,
    where the integrand is smooth. The height has period ``pi``.
    """
    beta = params.beta
    cb = math.cos(beta)
    c = params.c
    span = (float(s_span[0]), float(s_span[1]))
    if not span[1] > span[0]:
        raise DomainError("s_span must be increasing")

    def evaluator(s):
        z = catenary_height(beta, s)
        zdot = cb * np.cos(2.0 * s) / (2.0 * z)
        lam = catenary_longitude(beta, s)
        pos, tan = frame_from_height(z, zdot, lam, -c / z)
        return pos, tan, lam

    tps = []
    k = math.ceil((span[0] - 0.25 * math.pi) / (0.5 * math.pi))
    while 0.25 * math.pi + k * 0.5 * math.pi < span[1]:
        tps.append(0.25 * math.pi + k * 0.5 * math.pi)
        k += 1
    return ProfileCurve(MomentumProfile.catenary(c), span, evaluator, turning_points=tps,
                        z_period=math.pi, n_samples=n_samples,
                        name=f"catenary beta={beta:.6g}")


def closure_function(beta: float) -> float:
    """``T(beta) = lam(pi) / (2 pi)``, the longitude turned per height period over ``2 pi``.

    Increases from 1/2 as ``beta -> 0`` to ``sqrt(2)/2`` at ``beta = pi/2``.
    """
    beta = float(beta)
    if not (0.0 < beta <= 0.5 * math.pi):
        raise DomainError(f"beta must lie in (0, pi/2), got {beta}")
    return _lambda_segment(beta, 0.0, math.pi) / (2.0 * math.pi)


def _as_fraction(q):
    if isinstance(q, Fraction):
        return q
    if isinstance(q, str):
        return Fraction(q.strip())
    return None


def solve_beta_for_rotation(q) -> CatenaryParams:
    """Find ``beta_q`` with ``T(beta_q) = q`` by bracketed root search.

    ``q`` may be a float, a :class:`fractions.Fraction` or a string such as
    ``"2/3"``.

    Raises
    ------
    RangeError
        If ``q`` is not in ``(1/2, sqrt(2)/2)``.
    ConvergenceError
        If the root is not located to ``|T - q| < 1e-10``.
    """
    frac = _as_fraction(q)
    qf = float(frac) if frac is not None else float(q)
    if not (T_LOWER < qf < T_UPPER):
        raise RangeError(f"q={qf} is outside (1/2, sqrt(2)/2)")
    lo = 1e-3
    for _ in range(60):
        if closure_function(lo) < qf:
            break
        lo *= 0.5
    else:
        raise ConvergenceError(f"could not bracket beta for q={qf}")
    hi = 0.5 * math.pi
    beta = brentq(lambda b: closure_function(b) - qf, lo, hi, xtol=1e-15, rtol=1e-15, maxiter=200)
    if abs(closure_function(beta) - qf) >= 1e-10:
        raise ConvergenceError(f"root search for q={qf} stalled at beta={beta}")
    if beta >= 0.5 * math.pi:
        raise ConvergenceError("root landed on beta = pi/2")
    return CatenaryParams(beta)


def closure_residual(params: CatenaryParams, q, n_check=33) -> float:
    """Largest ambient gap ``|xi(s + m pi) - xi(s)|`` for ``q = k/m``.

    The longitude at ``s + m pi`` is integrated directly rather than through
    the period decomposition, so the check does not assume what it verifies.
    """
    frac = _as_fraction(q)
    if frac is None:
        frac = Fraction(q).limit_denominator(1000)
    m = frac.denominator
    beta = params.beta
    s = np.linspace(0.0, math.pi, n_check)
    z0 = catenary_height(beta, s)
    z1 = catenary_height(beta, s + m * math.pi)
    lam0 = catenary_longitude(beta, s, periodic=False)
    lam1 = catenary_longitude(beta, s + m * math.pi, periodic=False)

    def point(z, lam):
        r = np.sqrt(1.0 - z * z)
        return np.stack([r * np.cos(lam), r * np.sin(lam), z], axis=-1)

    return float(np.max(np.linalg.norm(point(z1, lam1) - point(z0, lam0), axis=1)))
