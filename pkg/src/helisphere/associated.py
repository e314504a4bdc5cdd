"""Catenoid/helicoid conjugation and the associated family of a spherical catenoid.

A catenoid ``Cat_beta`` and its associated minimal immersions (rotation
angle ``theta`` of the second fundamental form) are realized by minimal
helicoidal surfaces ``Hel_c^h``. The pitch and constant are related by

    ((1 - h^2)^2 c^2 + h^2) / (1 + h^2)^2 = sin(beta)^2 / 4,
    h / (1 + h^2) = sin(beta) sin(theta) / 2,
    c (1 - h^2) / (1 + h^2) = sin(beta) cos(theta) / 2,

with ``h < 1`` for ``theta < pi/2`` and ``h > 1`` for ``theta > pi/2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError, PitchMismatchError
from .families import CatenaryParams, catenary, catenary_height, great_circle
from .momentum import MomentumProfile, _band_product
from .report import CheckReport
from .surface import HelicoidalSurface, first_form, forms_from_momentum

PITCH_MATCH_TOL = 1e-12
RELATION_TOL = 1e-12


@dataclass(frozen=True)
class AssociatedParams:
    """Catenoid parameter ``beta`` in ``(0, pi/2]`` and family angle ``theta`` in ``[0, pi]``."""

    beta: float
    theta: float

    def __post_init__(self):
        if not (0.0 < self.beta <= 0.5 * math.pi):
            raise DomainError(f"beta must lie in (0, pi/2], got {self.beta}")
        if not (0.0 <= self.theta <= math.pi):
            raise DomainError(f"theta must lie in [0, pi], got {self.theta}")


@dataclass(frozen=True)
class HelicoidParams:
    """Pitch ``h >= 0`` (``h != 1``) and constant ``0 <= c < 1/2`` of ``Hel_c^h``."""

    h: float
    c: float

    def __post_init__(self):
        if not self.h >= 0.0:
            raise DomainError(f"pitch must be non-negative, got {self.h}")
        if self.h == 1.0:
            raise DomainError("pitch 1 gives flat Clifford representations, outside the family")
        if not (0.0 <= self.c < 0.5):
            raise DomainError(f"c must lie in [0, 1/2), got {self.c}")

    def momentum(self) -> MomentumProfile:
        return MomentumProfile.minimal_helicoidal(self.h, self.c)


def relation_residuals(ap: AssociatedParams, hp: HelicoidParams):
    """Residuals of the three pitch/constant relations, as a tuple."""
    h, c = hp.h, hp.c
    sb = math.sin(ap.beta)
    q = 1.0 + h * h
    return (
        ((1.0 - h * h) ** 2 * c * c + h * h) / (q * q) - 0.25 * sb * sb,
        h / q - 0.5 * sb * math.sin(ap.theta),
        c * (1.0 - h * h) / q - 0.5 * sb * math.cos(ap.theta),
    )


def params_from_associated(ap: AssociatedParams) -> HelicoidParams:
    """Pitch and constant of the helicoidal surface realizing ``(Cat_beta)_theta``.

    ``h`` solves ``u h^2 - h + u = 0`` with ``u = sin(beta) sin(theta) / 2``;
    the root below 1 is taken for ``theta <= pi/2`` and the one above 1
    otherwise. ``c`` then follows linearly.

    Raises
    ------
    DomainError
        For ``theta = pi`` (the pitch is infinite), for ``beta = theta = pi/2``
        (pitch 1) or if the constant leaves ``[0, 1/2)``.
    ConvergenceError
        If the relations are not met to 1e-12.
    """
    beta, theta = ap.beta, ap.theta
    if theta == math.pi:
        raise DomainError("theta = pi needs an infinite pitch")
    sb = math.sin(beta)
    u = 0.5 * sb * math.sin(theta)
    disc = math.sqrt(max(1.0 - 4.0 * u * u, 0.0))
    if u == 0.0:
        h = 0.0
    elif theta <= 0.5 * math.pi:
        h = 2.0 * u / (1.0 + disc)
    else:
        h = (1.0 + disc) / (2.0 * u)
    if h == 1.0 or abs(h - 1.0) < 1e-15:
        raise DomainError("beta = theta = pi/2 gives pitch 1 (the Clifford torus)")
    c = 0.5 * sb * math.cos(theta) * (1.0 + h * h) / (1.0 - h * h)
    c = abs(c) if abs(c) < 1e-300 else c
    if not (0.0 <= c < 0.5):
        raise DomainError(f"constant c = {c} falls outside [0, 1/2)")
    hp = HelicoidParams(h, c)
    worst = max(abs(r) for r in relation_residuals(ap, hp))
    if worst > RELATION_TOL:
        raise ConvergenceError(f"pitch relations not met: residual {worst:.3g}")
    return hp


def associated_from_params(hp: HelicoidParams) -> AssociatedParams:
    """Inverse of :func:`params_from_associated`.

    ``sin(beta) = 2 sqrt((1 - h^2)^2 c^2 + h^2) / (1 + h^2)`` and
    ``cos(theta) = c (1 - h^2) / sqrt((1 - h^2)^2 c^2 + h^2)``.

    Raises
    ------
    DomainError
        If ``h = c = 0`` (no catenoid) or ``sin(beta)`` would exceed 1.
    """
    h, c = hp.h, hp.c
    rad = math.sqrt((1.0 - h * h) ** 2 * c * c + h * h)
    if rad == 0.0:
        raise DomainError("h = c = 0 is the totally geodesic sphere, not a catenoid")
    sb = 2.0 * rad / (1.0 + h * h)
    if sb > 1.0 + 1e-15:
        raise DomainError(f"sin(beta) = {sb} exceeds 1")
    beta = math.asin(min(sb, 1.0))
    # atan2 keeps theta accurate near 0 and pi, where arccos loses digits.
    theta = math.atan2(h, c * (1.0 - h * h))
    return AssociatedParams(beta, theta)


def conjugate_pitches(beta: float):
    """The two pitches ``(tan(beta/2), cot(beta/2))`` of Lawson helicoids isometric to ``Cat_beta``."""
    beta = float(beta)
    if not (0.0 < beta < 0.5 * math.pi):
        raise DomainError(f"beta must lie in (0, pi/2), got {beta}")
    return math.tan(0.5 * beta), 1.0 / math.tan(0.5 * beta)


def isometry_pullback(beta: float, h: float, n: int = 257) -> CheckReport:
    """Pull the Lawson helicoid metric back to the catenoid and compare.

    The map is ``(s, t) -> (s + pi/4, t / sqrt(1 + h^2))`` for ``h < 1`` and
    ``(s - pi/4, t / sqrt(1 + h^2))`` for ``h > 1``. Both metrics come from
    :func:`helisphere.surface.first_form` on the catenary and on the great
    circle through the pole.

    Raises
    ------
    PitchMismatchError
        If ``h`` is neither ``tan(beta/2)`` nor ``cot(beta/2)``.
    """
    h_lo, h_hi = conjugate_pitches(beta)
    h = float(h)
    if abs(h - h_lo) <= PITCH_MATCH_TOL * h_lo:
        shift = 0.25 * math.pi
    elif abs(h - h_hi) <= PITCH_MATCH_TOL * h_hi:
        shift = -0.25 * math.pi
    else:
        raise PitchMismatchError(
            f"pitch {h} is not a conjugate pitch of beta={beta} ({h_lo}, {h_hi})")

    # Helicoid arc length s~ = s + shift stays inside (0, pi).
    st = np.linspace(1e-3, math.pi - 1e-3, n)
    s = st - shift
    hel = HelicoidalSurface(h, great_circle(0.5 * math.pi))
    g11h, g12h, g22h = first_form(hel, st)
    scale = 1.0 / (1.0 + h * h)  # dt~ = dt / sqrt(1 + h^2)
    pulled = (np.asarray(g11h), np.asarray(g12h) * math.sqrt(scale), np.asarray(g22h) * scale)

    s_mod = np.mod(s, math.pi)
    cat = HelicoidalSurface(0.0, catenary(CatenaryParams(beta)))
    g11c, g12c, g22c = first_form(cat, s_mod)
    # The catenary has period pi, so the shifted samples are wrapped into one period.
    dist = max(float(np.max(np.abs(a - np.asarray(b))))
               for a, b in zip(pulled, (g11c, g12c, g22c)))
    ref = 0.5 * (1.0 + math.cos(beta) * np.sin(2.0 * s))
    closed_form = float(np.max(np.abs(pulled[2] - ref)))
    return CheckReport(
        name=f"isometry pullback beta={beta:.6g} h={h:.6g}",
        max_residual=max(dist, closed_form),
        tolerance=1e-10,
        grid=f"{n} arc-length samples",
        details={"branch": "+" if shift > 0 else "-", "metric_distance": dist,
                 "closed_form_distance": closed_form},
    )


@dataclass(frozen=True)
class IsothermalForms:
    """Forms of ``(Cat_beta)_theta`` in isothermal coordinates, as functions of ``zt``."""

    zt: np.ndarray
    g_xx: np.ndarray
    g_xy: np.ndarray
    g_yy: np.ndarray
    s_xx: np.ndarray
    s_xy: np.ndarray
    s_yy: np.ndarray


def catenoid_height_range(beta: float):
    """Open height range ``(sin(beta/2), cos(beta/2))`` of the catenary ``C_beta``."""
    return math.sin(0.5 * beta), math.cos(0.5 * beta)


def isothermal_forms(ap: AssociatedParams, zt=None, n: int = 65) -> IsothermalForms:
    """First form ``zt^2 (dx^2 + dy^2)`` and the rotated second form of ``(Cat_beta)_theta``.

    ``zt`` defaults to ``n`` heights of the catenary sampled by arc length.
    """
    if zt is None:
        zt = catenary_height(ap.beta, np.linspace(0.0, math.pi, n, endpoint=False))
    zt = np.asarray(zt, dtype=float)
    half = 0.5 * math.sin(ap.beta)
    a = np.full_like(zt, half * math.cos(ap.theta))
    b = np.full_like(zt, half * math.sin(ap.theta))
    return IsothermalForms(zt, zt * zt, np.zeros_like(zt), zt * zt, a, b, -a)


def _helicoid_height(zt, h):
    # Inverse of zt^2 = ((1 - h^2) z^2 + h^2) / (1 + h^2), arranged to avoid
    # cancelling h^2 terms when the pitch is large.
    zt2 = zt * zt
    if h <= 1.0:
        return np.sqrt((zt2 - h * h * (1.0 - zt2)) / (1.0 - h * h))
    g = 1.0 / (h * h)
    return np.sqrt(((1.0 - zt2) - g * zt2) / (1.0 - g))


def transported_forms(ap: AssociatedParams, zt) -> tuple:
    """Forms of ``Hel_c^h`` carried to the catenoid's isothermal coordinates.

    Works on the branch where both profiles climb. Returns
    ``(hp, IsothermalForms)`` with the helicoid's forms expressed in ``(x, y)``.
    """
    hp = params_from_associated(ap)
    h, c = hp.h, hp.c
    if h == 0.0 and ap.theta != 0.0:
        raise DomainError("theta must be 0 when the pitch vanishes")
    zt = np.asarray(zt, dtype=float)
    z = _helicoid_height(zt, h)
    p = hp.momentum()
    K, dK = p._raw(z)
    f = forms_from_momentum(h, z, K, dK)

    # Chain x <- s~ <- zt <- z <- s and y <- t~ <- (z, t).
    # Climb rates 1 - z^2 - K^2 in factored form; the plain difference
    # cancels badly near the turning points once the pitch is large.
    band = np.maximum(_band_product(z, c), 0.0)
    zdot = z * np.sqrt(band / (z ** 4 + h * h * c * c))
    ztdot = np.sqrt(np.maximum(_band_product(zt, 0.5 * math.sin(ap.beta)), 0.0)) / zt
    dzt_dz = (1.0 - h * h) * z / ((1.0 + h * h) * zt)
    # For h > 1 the dt~ relation flips sign; x_s turns negative through dzt/dz.
    sgn = 1.0 if h < 1.0 else -1.0
    q = math.sqrt(1.0 + h * h)
    x_s = dzt_dz * zdot / (zt * ztdot)
    with np.errstate(invalid="ignore", divide="ignore"):
        rad = np.sqrt(band)
        dtt_dz = sgn * h * c * q / (z * np.sqrt((1.0 - h * h) * z * z + h * h) * rad)
        y_s = np.where(c == 0.0, 0.0, dtt_dz * zdot)
    y_t = sgn * q

    r = y_s / y_t

    def to_xy(a_ss, a_st, a_tt):
        a_xx = (a_ss - 2.0 * r * a_st + r * r * a_tt) / (x_s * x_s)
        a_xy = (a_st - r * a_tt) / (x_s * y_t)
        a_yy = a_tt / (y_t * y_t)
        return a_xx, a_xy, a_yy

    g = to_xy(f.g11, f.g12, f.g22)
    sig = to_xy(f.s11, f.s12, f.s22)
    return hp, IsothermalForms(zt, *g, *sig)


def verify_association(ap: AssociatedParams, n: int = 65, margin: float = 1e-3) -> CheckReport:
    """Compare the transported forms of ``Hel_c^h`` with the isothermal catenoid forms.

    Heights ``zt`` fill the catenary range with a relative ``margin`` kept
    away from the turning points, where the chain rule divides by zero.
    The residual is the sup-norm over both forms.
    """
    lo, hi = catenoid_height_range(ap.beta)
    w = hi - lo
    zt = np.linspace(lo + margin * w, hi - margin * w, n)
    hp, got = transported_forms(ap, zt)
    want = isothermal_forms(ap, zt)
    first = max(float(np.max(np.abs(getattr(got, k) - getattr(want, k))))
                for k in ("g_xx", "g_xy", "g_yy"))
    second = max(float(np.max(np.abs(getattr(got, k) - getattr(want, k))))
                 for k in ("s_xx", "s_xy", "s_yy"))
    return CheckReport(
        name=f"associated family beta={ap.beta:.6g} theta={ap.theta:.6g}",
        max_residual=max(first, second),
        tolerance=1e-6,
        grid=f"{n} heights in ({lo:.6g}, {hi:.6g})",
        details={"h": hp.h, "c": hp.c, "first_form": first, "second_form": second},
    )
