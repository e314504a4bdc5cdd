"""Spherical angular momentum and curve reconstruction.

A unit-speed curve ``xi = (x, y, z)`` on the upper half of the unit 2-sphere
carries the momentum ``K = x' y - x y'``. Written as a function of the height,
``K(z)`` is an antiderivative of the curve's geodesic curvature, and together
with one initial height it determines the curve up to a rotation about the
z-axis and a shift of arc length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.integrate import quad, solve_ivp
from scipy.interpolate import CubicHermiteSpline, PchipInterpolator

from ._backend import KIND_CATENARY, KIND_CONSTANT, KIND_LINEAR, KIND_MINIMAL, kernels
from .errors import (
    DomainError,
    GeometryError,
    NoOscillationError,
    SingularityError,
    ToleranceError,
)

# Slack allowed when checking that a height lies in a profile's domain.
DOMAIN_SLACK = 1e-9
# Heights this close to 1 are treated as reaching the pole z = 1.
POLE_GUARD = 1e-9

_KIND_CODES = {
    "constant": KIND_CONSTANT,
    "linear": KIND_LINEAR,
    "catenary": KIND_CATENARY,
    "minimal": KIND_MINIMAL,
}


def _quadratic_band(c2):
    """Heights with z^2 - z^4 >= c2, i.e. the band between the roots of z^4 - z^2 + c2."""
    disc = 1.0 - 4.0 * c2
    if disc < 0.0:
        raise DomainError(f"|c| = {math.sqrt(c2):.6g} exceeds 1/2; no valid heights")
    r = math.sqrt(disc)
    # (1 - r)/2 computed as 2 c2 / (1 + r) to avoid cancellation for small c.
    lo2 = 2.0 * c2 / (1.0 + r)
    hi2 = 0.5 * (1.0 + r)
    return math.sqrt(lo2), math.sqrt(hi2)


@dataclass(frozen=True, eq=False)
class MomentumProfile:
    """A momentum function ``K(z)`` together with the heights it is used on.

    Build instances with the classmethod constructors; ``kind`` is one of
    ``"constant"``, ``"linear"``, ``"catenary"``, ``"minimal"`` or
    ``"tabulated"`` and ``params`` holds the defining numbers. The default
    domain of an analytic profile is the closed band where
    ``1 - z^2 - K(z)^2 >= 0`` and ``z >= 0``, so its endpoints are turning
    points (or the equator).
    """

    kind: str
    params: tuple
    domain: tuple
    _interp: object = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        lo, hi = float(self.domain[0]), float(self.domain[1])
        if not (0.0 <= lo <= hi <= 1.0):
            raise DomainError(f"domain {self.domain} is not a sub-interval of [0, 1]")
        object.__setattr__(self, "domain", (lo, hi))

    # -- constructors -------------------------------------------------------

    @classmethod
    def constant(cls, c, domain=None):
        """``K = c``: great circles, or a parallel when the domain is a point."""
        c = float(c)
        if abs(c) > 1.0:
            raise DomainError("constant momentum must satisfy |c| <= 1")
        if domain is None:
            domain = (0.0, math.sqrt(1.0 - c * c))
        return cls("constant", (c,), domain)

    @classmethod
    def linear(cls, k0, c, domain=None):
        """``K = k0 z + c``: small circles of geodesic curvature ``k0``."""
        k0, c = float(k0), float(c)
        if domain is None:
            w2 = 1.0 + k0 * k0
            disc = w2 - c * c
            if disc <= 0.0:
                raise DomainError(f"|c| must be below sqrt(1 + k0^2), got c={c}, k0={k0}")
            r = math.sqrt(disc)
            lo = max((-k0 * c - r) / w2, 0.0)
            hi = min((-k0 * c + r) / w2, 1.0)
            if hi <= lo:
                raise DomainError(f"linear momentum k0={k0}, c={c} has no valid height z > 0")
            domain = (lo, hi)
        return cls("linear", (k0, c), domain)

    @classmethod
    def catenary(cls, c, domain=None):
        """``K = -c / z``: spherical catenaries (``2c = sin(beta)``)."""
        c = float(c)
        if domain is None:
            domain = (0.0, 1.0) if c == 0.0 else _quadratic_band(c * c)
        return cls("catenary", (c,), domain)

    @classmethod
    def minimal_helicoidal(cls, h, c, domain=None):
        """Momentum of the minimal helicoidal surfaces of pitch ``h``.

        ``K = -c sqrt(h^2 + (1 - h^2) z^2) / sqrt(z^4 + h^2 c^2)``. The valid
        band ``z^2 - z^4 >= c^2`` does not depend on the pitch.
        """
        h, c = float(h), float(c)
        if h < 0.0:
            raise DomainError("pitch must be non-negative")
        if domain is None:
            domain = (0.0, 1.0) if c == 0.0 else _quadratic_band(c * c)
        return cls("minimal", (h, c), domain)

    @classmethod
    def tabulated(cls, z, K, dK=None):
        """Interpolated momentum from samples ``(z_i, K_i)``.

        With slopes ``dK`` the interpolant is the cubic Hermite spline through
        the exact data; without them a monotonicity-preserving PCHIP spline is
        used. Both are C^1. Evaluation outside ``[z[0], z[-1]]`` is refused.
        """
        z = np.asarray(z, dtype=float)
        K = np.asarray(K, dtype=float)
        if z.ndim != 1 or z.shape != K.shape or z.size < 2:
            raise ValueError("z and K must be 1-D arrays of equal length >= 2")
        if np.any(np.diff(z) <= 0.0):
            raise DomainError("tabulated heights must be strictly increasing")
        if dK is None:
            interp = PchipInterpolator(z, K, extrapolate=False)
        else:
            interp = CubicHermiteSpline(z, K, np.asarray(dK, dtype=float), extrapolate=False)
        return cls("tabulated", (z.size,), (z[0], z[-1]), interp)

    # -- evaluation ---------------------------------------------------------

    @property
    def kernel_args(self):
        """``(code, p0, p1)`` for the compiled kernels, or None when tabulated."""
        code = _KIND_CODES.get(self.kind)
        if code is None:
            return None
        p = self.params
        if self.kind in ("constant", "catenary"):
            return code, p[0], 0.0
        return code, p[0], p[1]

    def _raw(self, z):
        # (K, K') with no domain check; tabulated heights are clipped to the hull.
        z = np.asarray(z, dtype=float)
        args = self.kernel_args
        if args is not None:
            K, dK = kernels.momentum_eval(args[0], args[1], args[2], z)
            return np.asarray(K, dtype=float), np.asarray(dK, dtype=float)
        zc = np.clip(z, self.domain[0], self.domain[1])
        return self._interp(zc), self._interp(zc, 1)

    def __call__(self, z):
        """Momentum and its derivative at ``z``; raises DomainError outside the domain."""
        zz = np.asarray(z, dtype=float)
        lo, hi = self.domain
        if np.any(zz < lo - DOMAIN_SLACK) or np.any(zz > hi + DOMAIN_SLACK) or np.any(np.isnan(zz)):
            raise DomainError(f"height outside momentum domain [{lo:.12g}, {hi:.12g}]")
        K, dK = self._raw(zz)
        if np.ndim(z) == 0:
            return float(K), float(dK)
        return K, dK

    def radicand(self, z):
        """``1 - z^2 - K(z)^2``; positive where the curve can move in height.

        Analytic kinds use a factorization through the turning points, which
        keeps full relative accuracy next to them.
        """
        z = np.asarray(z, dtype=float)
        kind, p = self.kind, self.params
        if kind == "constant":
            w = math.sqrt(max(1.0 - p[0] * p[0], 0.0))
            return (w - z) * (w + z)
        if kind == "linear":
            r_lo, r_hi = _linear_roots(p[0], p[1])
            return (1.0 + p[0] * p[0]) * (z - r_lo) * (r_hi - z)
        if kind == "catenary":
            return _band_product(z, p[0]) / (z * z)
        if kind == "minimal":
            h, c = p
            return z * z * _band_product(z, c) / (z ** 4 + h * h * c * c)
        K, _ = self._raw(z)
        return 1.0 - z * z - K * K


def _linear_roots(k0, c):
    # Roots of (1 + k0^2) z^2 + 2 k0 c z + c^2 - 1; the smaller-magnitude one
    # comes from the product of roots to avoid cancellation.
    w2 = 1.0 + k0 * k0
    r = math.sqrt(max(w2 - c * c, 0.0))
    big = (-k0 * c - math.copysign(r, k0 * c)) / w2
    small = (c * c - 1.0) / (w2 * big) if big != 0.0 else r / w2
    return (min(big, small), max(big, small)) if big != 0.0 else (-r / w2, r / w2)


def _band_product(z, c):
    """``z^2 - z^4 - c^2`` written as ``(z^2 - w_lo)(w_hi - z^2)``."""
    c2 = c * c
    root = math.sqrt(max(1.0 - 4.0 * c2, 0.0))
    z2 = z * z
    return (z2 - 2.0 * c2 / (1.0 + root)) * (0.5 * (1.0 + root) - z2)


def eval_momentum(p: MomentumProfile, z):
    """Return ``(K(z), K'(z))``; arrays in, arrays out."""
    return p(z)


def curvature_from_momentum(p: MomentumProfile, z):
    """Geodesic curvature of the curve at height ``z``, which is ``K'(z)``."""
    return p(z)[1]


def _substituted(z0, z1, fn):
    # z = z0 + (z1 - z0)(1 - cos u)/2 turns 1/sqrt(turning point) ends into bounded ones.
    half = 0.5 * (z1 - z0)

    def integrand(u):
        z = z0 + half * (1.0 - math.cos(u))
        return fn(z) * half * math.sin(u)

    return integrand


def _check_interior(p, z0, z1):
    lo, hi = p.domain
    for z in (z0, z1):
        if z < lo - DOMAIN_SLACK or z > hi + DOMAIN_SLACK:
            raise DomainError(f"height {z:.12g} outside momentum domain [{lo:.12g}, {hi:.12g}]")
    zz = np.linspace(z0, z1, 259)[1:-1]
    if zz.size and np.min(p.radicand(zz)) < -1e-14:
        raise SingularityError("1 - z^2 - K^2 is negative strictly inside the height interval")


def _height_integral(p, z0, z1, numerator):
    if z0 == z1:
        return 0.0
    sign = 1.0
    if z1 < z0:
        z0, z1 = z1, z0
        sign = -1.0
    _check_interior(p, z0, z1)

    def fn(z):
        f = p.radicand(z)
        if f <= 0.0:
            return 0.0
        return numerator(z) / math.sqrt(f)

    val, err = quad(_substituted(z0, z1, fn), 0.0, math.pi, epsabs=1e-14, epsrel=1e-13, limit=500)
    if not np.isfinite(val):
        raise SingularityError("height integral diverged")
    return sign * val


def arc_length_of_height(p: MomentumProfile, z0: float, z1: float) -> float:
    """Arc length needed to climb from height ``z0`` to ``z1``.

    Evaluates ``int dz / sqrt(1 - z^2 - K(z)^2)``. Turning points at the ends
    make the integral improper; a cosine substitution removes the
    inverse-square-root blow-up so the integrand stays bounded.

    Raises
    ------
    DomainError
        If an endpoint lies outside ``p.domain``.
    SingularityError
        If the radicand is negative somewhere strictly between the endpoints.
    """
    return _height_integral(p, float(z0), float(z1), lambda z: 1.0)


def _longitude_rate_of_height(p):
    def num(z):
        K = float(p._raw(z)[0])
        return K / (z * z - 1.0)

    return num


def _turning_pair(p):
    lo, hi = p.domain
    tol = 1e-10
    f_lo = float(p.radicand(lo))
    f_hi = float(p.radicand(hi))
    if lo <= 0.0 or hi >= 1.0 - POLE_GUARD or abs(f_lo) > tol or abs(f_hi) > tol or hi <= lo:
        raise NoOscillationError(
            "momentum has no pair of turning points inside (0, 1); the height does not oscillate"
        )
    return lo, hi


def z_period_and_rotation(p: MomentumProfile):
    """Height period ``S`` and longitude advance ``dlam`` over one period.

    Requires both ends of ``p.domain`` to be turning points strictly inside
    ``(0, 1)``; otherwise raises :class:`NoOscillationError`.
    """
    lo, hi = _turning_pair(p)
    S = 2.0 * arc_length_of_height(p, lo, hi)
    dlam = 2.0 * _height_integral(p, lo, hi, _longitude_rate_of_height(p))
    return S, dlam


# -- curves -----------------------------------------------------------------


class ProfileSamples(NamedTuple):
    s: np.ndarray
    z: np.ndarray
    lam: np.ndarray
    pos: np.ndarray
    tan: np.ndarray


@dataclass(frozen=True)
class ReconstructionConfig:
    """Integrator settings for :func:`reconstruct_curve`.

    ``n_samples`` sets how many evenly spaced samples are stored on the
    curve; ``stencil_step`` bounds the fixed RK4 step used for local stencils.
    """

    rtol: float = 1e-10
    atol: float = 1e-12
    n_samples: int = 513
    max_step: float = np.inf
    stencil_step: float = 2e-3


def frame_from_height(z, zdot, lam, K):
    """Position and unit tangent from ``(z, z', lambda)`` and the momentum.

    Uses ``pos = (r cos lam, r sin lam, z)`` with ``r = sqrt(1 - z^2)`` and
    ``lam' = K / (z^2 - 1)``.
    """
    z = np.asarray(z, dtype=float)
    zdot = np.asarray(zdot, dtype=float)
    lam = np.asarray(lam, dtype=float)
    r = np.sqrt(np.maximum(1.0 - z * z, 0.0))
    cl, sl = np.cos(lam), np.sin(lam)
    with np.errstate(divide="ignore", invalid="ignore"):
        rdot = -z * zdot / r
        r_lamdot = -np.asarray(K, dtype=float) / r
    pos = np.stack([r * cl, r * sl, z], axis=-1)
    tan = np.stack([rdot * cl - r_lamdot * sl, rdot * sl + r_lamdot * cl, zdot], axis=-1)
    return pos, tan


class ProfileCurve:
    """A unit-speed profile curve on the upper half 2-sphere.

    Parameters
    ----------
    momentum : MomentumProfile
        Momentum carried by the curve.
    s_span : (float, float)
        Arc-length range on which the curve is defined.
    evaluator : callable
        ``s -> (pos, tan, lam)`` for an array of arc lengths.
    turning_points, z_period, degenerate
        Height structure; ``degenerate`` marks curves of constant height,
        whose momentum is not a function of ``z``.
    local : callable, optional
        ``(s0, offsets) -> (pos, tan)`` giving a smooth local evaluation for
        finite-difference stencils; defaults to ``evaluator``.
    """

    def __init__(self, momentum, s_span, evaluator, turning_points=(), z_period=None,
                 degenerate=False, local=None, n_samples=513, name=""):
        self.momentum = momentum
        self.s_span = (float(s_span[0]), float(s_span[1]))
        self._evaluator = evaluator
        self._local = local
        self.turning_points = tuple(float(v) for v in turning_points)
        self.z_period = z_period
        self.degenerate = bool(degenerate)
        self.name = name
        self.samples = self.at(np.linspace(self.s_span[0], self.s_span[1], n_samples))

    def __repr__(self):
        return (f"ProfileCurve({self.name or self.momentum.kind}, s_span={self.s_span}, "
                f"turning_points={len(self.turning_points)}, z_period={self.z_period})")

    def _check_span(self, s):
        lo, hi = self.s_span
        pad = 1e-9 * max(1.0, abs(lo), abs(hi))
        if np.any(s < lo - pad) or np.any(s > hi + pad):
            raise DomainError(f"arc length outside curve range [{lo:.12g}, {hi:.12g}]")

    def at(self, s) -> ProfileSamples:
        """Samples at arc lengths ``s`` (any shape; flattened)."""
        s = np.atleast_1d(np.asarray(s, dtype=float)).ravel()
        self._check_span(s)
        pos, tan, lam = self._evaluator(s)
        return ProfileSamples(s, pos[:, 2].copy(), lam, pos, tan)

    def height_and_momentum(self, s):
        """``(z, K, K')`` at arc lengths ``s`` for the closed-form surface layer."""
        z = self.at(s).z
        K, dK = self.momentum._raw(z)
        return z, K, dK

    def local(self, s0, offsets):
        """``(pos, tan)`` at ``s0 + offsets``, smooth in the offsets."""
        offsets = np.asarray(offsets, dtype=float)
        if self._local is not None:
            return self._local(float(s0), offsets)
        smp = self.at(s0 + offsets)
        return smp.pos, smp.tan

    def sample(self, n):
        """``n`` evenly spaced samples across the whole arc-length range."""
        return self.at(np.linspace(self.s_span[0], self.s_span[1], n))


def _kd_callable(p):
    args = p.kernel_args
    if args is not None:
        code, p0, p1 = args
        return None, (code, p0, p1)

    def kd(z):
        K, dK = p._raw(z)
        return float(K), float(dK)

    return kd, None


def reconstruct_curve(p: MomentumProfile, s_span, z_init: float, dz_sign_init: int = 1,
                      cfg: ReconstructionConfig | None = None) -> ProfileCurve:
    """Rebuild the profile curve carrying momentum ``p``.

    The curve starts at height ``z_init`` at ``s_span[0]`` with longitude 0,
    moving up in height if ``dz_sign_init`` is +1 and down if -1. Instead of
    the first-order equation ``z' = +-sqrt(1 - z^2 - K^2)``, whose sign flips
    at turning points, the smooth second-order system

        z'' = -z - K K',    lam' = K / (z^2 - 1)

    is integrated with ``z'(s0) = +-sqrt(1 - z^2 - K^2)``. It conserves
    ``z'^2 + z^2 + K^2 = 1`` and passes through turning points without
    special handling; these are located as events where ``z' = 0``.

    Raises
    ------
    DomainError
        If ``z_init`` is not a valid height or the trajectory leaves ``p.domain``.
    SingularityError
        If the curve runs into the pole ``z = 1``.
    ToleranceError
        If the integrator fails.
    """
    cfg = cfg or ReconstructionConfig()
    s0, s1 = float(s_span[0]), float(s_span[1])
    if not s1 > s0:
        raise DomainError("s_span must be increasing")
    z_init = float(z_init)
    K0, _ = p(z_init)
    f0 = 1.0 - z_init * z_init - K0 * K0
    if f0 < -1e-12:
        raise DomainError(f"z_init={z_init} violates K^2 + z^2 <= 1")
    if z_init >= 1.0 - POLE_GUARD:
        raise SingularityError("initial height is at the pole z = 1")
    zdot0 = math.copysign(math.sqrt(max(f0, 0.0)), dz_sign_init if dz_sign_init else 1)
    y0 = np.array([z_init, zdot0, 0.0])

    kd, args = _kd_callable(p)
    if args is not None:
        code, p0, p1 = args

        def rhs(s, y):
            return kernels.profile_rhs(code, p0, p1, s, y)
    else:
        def rhs(s, y):
            K, dK = kd(y[0])
            return np.array([y[1], -y[0] - K * dK, K / (y[0] * y[0] - 1.0)])

    lo, hi = p.domain

    def turning(s, y):
        return y[1]

    def pole(s, y):
        return y[0] - (1.0 - POLE_GUARD)

    def below(s, y):
        return y[0] - (lo - 1e-7)

    def above(s, y):
        return y[0] - (hi + 1e-7)

    pole.terminal = True
    pole.direction = 1.0
    below.terminal = True
    below.direction = -1.0
    above.terminal = True
    above.direction = 1.0

    sol = solve_ivp(rhs, (s0, s1), y0, method="DOP853", rtol=cfg.rtol, atol=cfg.atol,
                    dense_output=True, events=(turning, pole, below, above), max_step=cfg.max_step)
    if sol.status == -1:
        raise ToleranceError(f"profile integration failed: {sol.message}")
    if sol.t_events[1].size:
        raise SingularityError(f"profile reaches the pole z = 1 at s = {sol.t_events[1][0]:.12g}")
    if sol.t_events[2].size or sol.t_events[3].size:
        s_bad = (list(sol.t_events[2]) + list(sol.t_events[3]))[0]
        raise DomainError(f"profile leaves the momentum domain at s = {s_bad:.12g}")

    dense = sol.sol
    turning_points = [t for t in sol.t_events[0] if t > s0]

    def evaluator(s):
        z, zdot, lam = dense(s)
        K, _ = p._raw(z)
        return (*frame_from_height(z, zdot, lam, K), lam)

    def local(sc, offsets):
        y_c = dense(sc)
        if args is not None:
            states = kernels.rk4_march(code, p0, p1, y_c, offsets, cfg.stencil_step)
        else:
            states = kernels.rk4_march_generic(kd, y_c, offsets, cfg.stencil_step)
        states = np.asarray(states)
        K, _ = p._raw(states[:, 0])
        return frame_from_height(states[:, 0], states[:, 1], states[:, 2], K)

    try:
        z_period = z_period_and_rotation(p)[0]
    except (NoOscillationError, SingularityError, DomainError):
        z_period = None
    return ProfileCurve(p, (s0, s1), evaluator, turning_points, z_period,
                        local=local, n_samples=cfg.n_samples, name=f"{p.kind} momentum")


def momentum_of_samples(points) -> np.ndarray:
    """Momentum ``x' y - x y'`` of each ``(pos, tan)`` pair.

    ``points`` may be a sequence of pairs or a pair of ``(n, 3)`` arrays.

    Raises
    ------
    GeometryError
        If a position or tangent is not a unit vector to within 1e-6.
    """
    if isinstance(points, tuple) and len(points) == 2 and np.ndim(points[0]) == 2:
        pos, tan = (np.asarray(a, dtype=float) for a in points)
    else:
        arr = np.asarray(points, dtype=float)
        if arr.ndim == 2:
            arr = arr[None]
        pos, tan = arr[:, 0, :], arr[:, 1, :]
    for name, v in (("position", pos), ("tangent", tan)):
        dev = np.max(np.abs(np.linalg.norm(v, axis=1) - 1.0)) if v.size else 0.0
        if dev > 1e-6:
            raise GeometryError(f"{name} deviates from unit length by {dev:.3g}")
    return tan[:, 0] * pos[:, 1] - pos[:, 0] * tan[:, 1]

