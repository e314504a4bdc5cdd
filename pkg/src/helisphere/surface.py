"""Helicoidal surfaces in the unit 3-sphere and their closed-form geometry.

A profile curve ``xi = (x, y, z)`` and a pitch ``h`` give the immersion

    X(s, t) = (x cos ht - y sin ht, x sin ht + y cos ht, z cos t, z sin t).

Every curvature quantity depends on ``s`` only, through ``z``, the momentum
``K(z)`` and its derivative. Nothing here differences samples; the
finite-difference cross-checks live in :mod:`helisphere.oracles`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .errors import DegenerateError, DomainError, PitchError
from .momentum import ProfileCurve

ALPHA_FLOOR = 1e-14


@dataclass(frozen=True)
class HelicoidalSurface:
    """Pitch ``h >= 0`` swept along a profile curve; ``h = 0`` is rotational."""

    pitch: float
    profile: ProfileCurve

    def __post_init__(self):
        if not self.pitch >= 0.0:
            raise DomainError(f"pitch must be non-negative, got {self.pitch}")


@dataclass(frozen=True)
class FormsAtPoint:
    """Fundamental forms and curvatures; fields are floats or equal-shape arrays."""

    g11: object
    g12: object
    g22: object
    s11: object
    s12: object
    s22: object
    alpha: object
    H: object
    K_ext: object
    K_G: object


def _scalarize(v, scalar):
    return float(np.asarray(v).ravel()[0]) if scalar else v


def _profile_state(surf, s):
    scalar = np.ndim(s) == 0
    z, K, dK = surf.profile.height_and_momentum(s)
    return scalar, z, K, dK


def _require_regular(surf):
    if surf.profile.degenerate:
        raise DegenerateError(
            "profile has constant height; its curvature is only available through the "
            "finite-difference oracle"
        )


def form_table(h, z, K, dK):
    """Raw ``(10, n)`` table of g11, g12, g22, s11, s12, s22, alpha, H, K_ext, K_G."""
    return np.asarray(kernels.helicoid_forms(float(h), np.ravel(z), np.ravel(K), np.ravel(dK)))


def forms(surf: HelicoidalSurface, s) -> FormsAtPoint:
    """All closed-form quantities at arc length(s) ``s``."""
    _require_regular(surf)
    scalar, z, K, dK = _profile_state(surf, s)
    tab = form_table(surf.pitch, z, K, dK)
    if np.min(tab[6]) < ALPHA_FLOOR:
        raise DegenerateError("area density vanishes")
    return FormsAtPoint(*(_scalarize(row, scalar) for row in tab))


def forms_from_momentum(h, z, K, dK) -> FormsAtPoint:
    """Closed-form quantities straight from ``(z, K, K')``, no curve needed."""
    scalar = np.ndim(z) == 0
    tab = form_table(h, z, K, dK)
    return FormsAtPoint(*(_scalarize(row, scalar) for row in tab))


def immerse(surf: HelicoidalSurface, s, t):
    """Point(s) ``X(s, t)`` on the unit 3-sphere; ``s`` and ``t`` broadcast.

    Returns an array of shape ``broadcast(s, t).shape + (4,)``.
    """
    s_b, t_b = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(t, dtype=float))
    pos = surf.profile.at(s_b.ravel()).pos
    return _sweep(surf.pitch, pos, t_b.ravel()).reshape(s_b.shape + (4,))


def _sweep(h, pos, t):
    x, y, z = pos[:, 0], pos[:, 1], pos[:, 2]
    ch, sh = np.cos(h * t), np.sin(h * t)
    return np.stack([x * ch - y * sh, x * sh + y * ch, z * np.cos(t), z * np.sin(t)], axis=-1)


def immerse_grid(surf: HelicoidalSurface, s, t):
    """Immersion on the tensor grid ``s x t``; shape ``(len(s), len(t), 4)``."""
    pos = surf.profile.at(np.asarray(s, dtype=float)).pos
    return np.asarray(kernels.helicoid_immersion(
        float(surf.pitch), pos[:, 0], pos[:, 1], pos[:, 2], np.asarray(t, dtype=float)))


def first_form(surf: HelicoidalSurface, s):
    """``(g11, g12, g22) = (1, -h K, h^2 + (1 - h^2) z^2)``."""
    scalar, z, K, _ = _profile_state(surf, s)
    h = surf.pitch
    g11 = np.ones_like(z)
    g12 = -h * K
    g22 = h * h + (1.0 - h * h) * z * z
    return tuple(_scalarize(v, scalar) for v in (g11, g12, g22))


def area_density(surf: HelicoidalSurface, s):
    """``alpha = sqrt(h^2 (1 - K^2) + (1 - h^2) z^2)``, the root of the metric determinant."""
    scalar, z, K, _ = _profile_state(surf, s)
    h = surf.pitch
    a2 = h * h * (1.0 - K * K) + (1.0 - h * h) * z * z
    return _scalarize(np.sqrt(np.maximum(a2, 0.0)), scalar)


def unit_normal(surf: HelicoidalSurface, s, t):
    """Unit normal of the immersion; ``s`` and ``t`` broadcast, output ``(..., 4)``.

    Raises
    ------
    DegenerateError
        Where the area density drops below 1e-14.
    """
    s_b, t_b = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(t, dtype=float))
    smp = surf.profile.at(s_b.ravel())
    t = t_b.ravel()
    h = surf.pitch
    x, y, z = smp.pos.T
    xd, yd, zd = smp.tan.T
    K = xd * y - x * yd
    a2 = h * h * (1.0 - K * K) + (1.0 - h * h) * z * z
    if np.min(a2) < ALPHA_FLOOR ** 2:
        raise DegenerateError("area density vanishes; normal undefined")
    alpha = np.sqrt(a2)
    ch, sh = np.cos(h * t), np.sin(h * t)
    ct, st = np.cos(t), np.sin(t)
    nu = np.stack([
        z * (-z * (xd * sh + yd * ch) + zd * (x * sh + y * ch)),
        z * (z * (xd * ch - yd * sh) - zd * (x * ch - y * sh)),
        -z * K * ct - h * zd * st,
        -z * K * st + h * zd * ct,
    ], axis=-1) / alpha[:, None]
    return nu.reshape(s_b.shape + (4,))


def second_form(surf: HelicoidalSurface, s):
    """``(s11, s12, s22) = (z K' / alpha, h (1 - K^2) / alpha, (1 - h^2) z^2 K / alpha)``."""
    f = forms(surf, s)
    return f.s11, f.s12, f.s22


def mean_curvature(surf: HelicoidalSurface, s):
    """Mean curvature ``H`` (half the trace of the shape operator)."""
    return forms(surf, s).H


def extrinsic_and_gauss(surf: HelicoidalSurface, s):
    """``(K_ext, K_G)`` with ``K_G = 1 + K_ext``."""
    f = forms(surf, s)
    return f.K_ext, f.K_G


def principal_curvatures_rotational(surf: HelicoidalSurface, s):
    """Principal curvatures ``(K'(z), K(z)/z)`` of a rotational (``h = 0``) surface.

    Raises
    ------
    PitchError
        If the pitch is not zero.
    """
    if surf.pitch != 0.0:
        raise PitchError("principal curvatures in closed form need pitch 0")
    _require_regular(surf)
    scalar, z, K, dK = _profile_state(surf, s)
    return _scalarize(dK, scalar), _scalarize(K / z, scalar)
