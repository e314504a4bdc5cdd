"""Momentum profiles from a prescribed mean or extrinsic curvature.

For pitch ``h`` a helicoidal surface has mean curvature ``H(z)`` exactly
when its momentum is

    K = +-sqrt(h^2 + (1 - h^2) z^2) A / sqrt(1 + h^2 A^2),
    A(z) = (2 int z H dz + const) / z^2,

and extrinsic curvature ``K_ext(z)`` (for ``h != 1``) exactly when

    K = +-sqrt(1 + (1 - h^2) z^2 B / (z^2 + h^2 B)),
    B(z) = 2 int z K_ext dz + const.

``const`` labels the one-parameter family of solutions. Prescriptions with a
known closed form come back as analytic profiles; everything else is
tabulated with exact slopes and a cubic Hermite interpolant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from numbers import Real

import numpy as np
from numpy.polynomial import Chebyshev
from scipy.integrate import quad

from .errors import DomainError, EmptyValidityError, NegativeRadicandError, PitchError
from .momentum import MomentumProfile
from .report import CheckReport
from .surface import forms_from_momentum

# Interior margin used when the requested interval touches z = 0 or z = 1;
# rotational surfaces pinch (alpha = z) as z -> 0.
EDGE = 1e-3
N_SCAN = 4001
N_NODES = 401
# Adaptive refinement of tabulated profiles.
SLOPE_TOL = 1e-10
RADICAND_FLOOR = 1e-6
MAX_REFINE = 12


@dataclass(frozen=True)
class PrescriptionResult:
    """A solution of the prescription problem.

    ``validity`` is the height interval on which ``K^2 + z^2 <= 1`` and the
    area density is positive; ``momentum`` is defined exactly there.
    ``note`` records truncations, such as several valid components.
    """

    momentum: MomentumProfile
    integration_constant: float
    sign: int
    validity: tuple
    note: str = ""


def _as_vectorized(fn):
    """Call ``fn`` on arrays if it supports that, else point by point."""
    probe = np.array([0.25, 0.5])
    try:
        out = np.asarray(fn(probe), dtype=float)
        if out.shape == probe.shape:
            return lambda z: np.asarray(fn(np.asarray(z, dtype=float)), dtype=float)
    except (TypeError, ValueError):
        pass
    return np.vectorize(lambda v: float(fn(float(v))), otypes=[float])


class _Antiderivative:
    """``I(z) = int_base^z w(t) dt`` for ``z`` in ``[lo, hi]``.

    ``w`` is approximated by Chebyshev series on panels that are split until
    the trailing coefficients fall below ``tol``; the integrated series are
    chained into a continuous antiderivative. ``w`` must accept arrays.
    """

    DEG = 24
    MAX_DEPTH = 16

    def __init__(self, w, base, lo, hi, tol=1e-15):
        self.base = float(base)
        panels = []
        stack = [(float(lo), float(hi), 0)]
        while stack:
            a, b, depth = stack.pop()
            ser = Chebyshev.interpolate(w, self.DEG, domain=[a, b])
            scale = max(1.0, float(np.max(np.abs(ser.coef))))
            if depth < self.MAX_DEPTH and np.max(np.abs(ser.coef[-3:])) > tol * scale:
                m = 0.5 * (a + b)
                stack.extend([(m, b, depth + 1), (a, m, depth + 1)])
            else:
                panels.append((a, ser.integ(lbnd=a)))
        panels.sort(key=lambda item: item[0])
        self.starts = np.array([a for a, _ in panels])
        self.series = [ser for _, ser in panels]
        ends = [ser(ser.domain[1]) for ser in self.series]
        self.offsets = np.concatenate([[0.0], np.cumsum(ends)[:-1]])
        self.lo, self.hi = float(lo), float(hi)
        # Shift so that I(base) = 0; a base outside the panels is reached by quad.
        if self.lo <= self.base <= self.hi:
            shift = self._raw(np.array([self.base]))[0]
        else:
            shift = -quad(lambda t: float(w(np.array([t]))[0]), self.lo, self.base,
                          epsabs=1e-15, epsrel=1e-13, limit=200)[0]
        self.offsets = self.offsets - shift

    def _raw(self, z):
        k = np.clip(np.searchsorted(self.starts, z, side="right") - 1, 0, len(self.series) - 1)
        out = np.empty_like(z)
        for j in np.unique(k):
            sel = k == j
            out[sel] = self.offsets[j] + self.series[j](z[sel])
        return out

    def __call__(self, z):
        z = np.atleast_1d(np.asarray(z, dtype=float))
        return self._raw(z)


def _check_sign(sign):
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    return int(sign)


def _scan_interval(interval):
    lo, hi = float(interval[0]), float(interval[1])
    if not (0.0 <= lo < hi <= 1.0):
        raise DomainError(f"interval {interval} is not inside [0, 1]")
    return max(lo, EDGE), min(hi, 1.0 - EDGE)


def _valid_component(ok_fn, lo, hi, n=N_SCAN):
    """Longest run of heights where ``ok_fn`` holds, with bisected endpoints."""
    z = np.linspace(lo, hi, n)
    ok = ok_fn(z)
    if not np.any(ok):
        return None, 0
    # Runs of consecutive True entries.
    edges = np.diff(np.concatenate([[0], ok.astype(int), [0]]))
    starts = np.nonzero(edges == 1)[0]
    stops = np.nonzero(edges == -1)[0] - 1
    k = int(np.argmax(z[stops] - z[starts]))
    i0, i1 = starts[k], stops[k]

    def refine(good, bad):
        for _ in range(200):
            mid = 0.5 * (good + bad)
            if mid in (good, bad):
                break
            if ok_fn(np.array([mid]))[0]:
                good = mid
            else:
                bad = mid
        return good

    a = z[i0] if i0 == 0 else refine(z[i0], z[i0 - 1])
    b = z[i1] if i1 == n - 1 else refine(z[i1], z[i1 + 1])
    if b <= a:
        return None, len(starts)
    return (a, b), len(starts)


def _nodes(a, b, n=N_NODES):
    # Chebyshev-Lobatto spacing, denser near the (turning-point) ends.
    return a + (b - a) * 0.5 * (1.0 - np.cos(np.linspace(0.0, math.pi, n)))


def _validity_of(K_fn, h, lo, hi):
    def ok(z):
        with np.errstate(invalid="ignore", divide="ignore"):
            K = K_fn(z)
            f = 1.0 - z * z - K * K
            a2 = h * h * (1.0 - K * K) + (1.0 - h * h) * z * z
        return np.isfinite(K) & (f >= 0.0) & (a2 > 0.0)

    return _valid_component(ok, lo, hi)


def _intersect(dom, lo, hi):
    a, b = max(dom[0], lo), min(dom[1], hi)
    if b <= a:
        raise EmptyValidityError("no valid heights inside the requested interval")
    return a, b


def _closed_form_mean(h, H, const, sign, lo, hi):
    """Analytic profile for constant ``H`` when one exists, else None."""
    if H == 0.0:
        c = -sign * const
        try:
            p = MomentumProfile.catenary(c) if h == 0.0 else MomentumProfile.minimal_helicoidal(h, c)
        except DomainError as exc:
            raise EmptyValidityError(str(exc)) from exc
        dom = _intersect(p.domain, lo, hi)
        if dom != p.domain:
            p = type(p)(p.kind, p.params, dom)
        return p
    if h == 0.0 and const == 0.0:
        p = MomentumProfile.linear(sign * H, 0.0)
        return type(p)(p.kind, p.params, _intersect(p.domain, lo, hi))
    return None


def _tabulate(K_fn, dK_fn, h, lo, hi, note=""):
    dom, n_comp = _validity_of(K_fn, h, lo, hi)
    if dom is None:
        raise EmptyValidityError("prescription has no height interval with K^2 + z^2 <= 1")
    if n_comp > 1:
        note = (note + "; " if note else "") + f"{n_comp} valid components, kept the longest"
    z = _nodes(*dom)
    K = K_fn(z)
    dK = dK_fn(z)
    # Bisect every panel where the Hermite spline misses the exact values.
    # The slope error of a cubic Hermite panel vanishes at its midpoint, so
    # slopes are probed at the quarter points and values at the midpoint.
    for _ in range(MAX_REFINE):
        prof = MomentumProfile.tabulated(z, K, dK)
        dz = np.diff(z)
        mid = z[:-1] + 0.5 * dz
        q1 = z[:-1] + 0.25 * dz
        q3 = z[:-1] + 0.75 * dz
        K_mid, dK_mid = K_fn(mid), dK_fn(mid)
        bad = np.abs(prof._raw(mid)[0] - K_mid) > SLOPE_TOL
        for q in (q1, q3):
            dK_q = dK_fn(q)
            bad |= np.abs(prof._raw(q)[1] - dK_q) > SLOPE_TOL * (1.0 + np.abs(dK_q))
        bad &= np.isfinite(dK_mid)
        if not np.any(bad):
            break
        z = np.concatenate([z, mid[bad]])
        K = np.concatenate([K, K_mid[bad]])
        dK = np.concatenate([dK, dK_mid[bad]])
        order = np.argsort(z)
        z, K, dK = z[order], K[order], dK[order]
    else:
        note = (note + "; " if note else "") + "slope refinement stopped at the round limit"
    return MomentumProfile.tabulated(z, K, dK), dom, note


def momentum_from_mean(h: float, H, const: float = 0.0, sign: int = 1,
                       interval=(0.0, 1.0), base: float = 0.0) -> PrescriptionResult:
    """Momentum of the helicoidal surfaces of pitch ``h`` with mean curvature ``H(z)``.

    Parameters
    ----------
    h : float
        Pitch, ``h >= 0``.
    H : float or callable
        Prescribed mean curvature. A callable is evaluated on arrays when it
        supports that, otherwise one float at a time.
    const : float
        Integration constant of the family.
    sign : {1, -1}
        Branch of the square root. Reversing it negates ``K``, which reverses
        the orientation: the ``-1`` branch has mean curvature ``-H`` with
        respect to the standard normal.
    interval : (float, float)
        Heights to search for validity.
    base : float
        Lower limit of the antiderivative ``int_base^z t H(t) dt``.

    Raises
    ------
    EmptyValidityError
        If no height in ``interval`` admits a valid profile.
    """
    h = float(h)
    if h < 0.0:
        raise DomainError("pitch must be non-negative")
    sign = _check_sign(sign)
    lo, hi = _scan_interval(interval)
    const = float(const)
    if isinstance(H, Real) and base == 0.0:
        full = (0.0, 1.0) if interval[0] <= 0 and interval[1] >= 1 else (lo, hi)
        p = _closed_form_mean(h, float(H), const, sign, *full)
        if p is not None:
            return PrescriptionResult(p, const, sign, p.domain)

    if isinstance(H, Real):
        Hv = float(H)

        def A_of(z):
            return (Hv * (z * z - base * base) + const) / (z * z)

        def H_of(z):
            return np.full_like(np.asarray(z, dtype=float), Hv)
    else:
        H_of = _as_vectorized(H)
        anti = _Antiderivative(lambda t: t * H_of(t), base, lo, hi)

        def A_of(z):
            z = np.atleast_1d(np.asarray(z, dtype=float))
            return (2.0 * anti(z) + const) / (z * z)

    h2 = h * h

    def K_of(z):
        z = np.asarray(z, dtype=float)
        A = A_of(z)
        return sign * np.sqrt(h2 + (1.0 - h2) * z * z) * A / np.sqrt(1.0 + h2 * A * A)

    def dK_of(z):
        z = np.asarray(z, dtype=float)
        A = A_of(z)
        dA = (2.0 * H_of(z) - 2.0 * A) / z
        G = np.sqrt(h2 + (1.0 - h2) * z * z)
        dG = (1.0 - h2) * z / G
        q = 1.0 + h2 * A * A
        return sign * (dG * A / np.sqrt(q) + G * dA / q ** 1.5)

    p, dom, note = _tabulate(K_of, dK_of, h, lo, hi)
    return PrescriptionResult(p, const, sign, dom, note)


def _closed_form_extrinsic(h, Kx, const, sign, lo, hi):
    if h != 0.0:
        return None
    if const == -1.0 and Kx >= 0.0:
        p = MomentumProfile.linear(sign * math.sqrt(Kx), 0.0)
        return type(p)(p.kind, p.params, _intersect(p.domain, lo, hi))
    if Kx == 0.0 and -1.0 < const < 0.0:
        p = MomentumProfile.constant(sign * math.sqrt(1.0 + const))
        return type(p)(p.kind, p.params, _intersect(p.domain, lo, hi))
    return None


def momentum_from_extrinsic(h: float, Kext, const: float = 0.0, sign: int = 1,
                            interval=(0.0, 1.0), base: float = 0.0) -> PrescriptionResult:
    """Momentum of the helicoidal surfaces of pitch ``h`` with extrinsic curvature ``Kext(z)``.

    Arguments mirror :func:`momentum_from_mean`. The extrinsic curvature is
    even in ``K``, so both signs realize the same ``Kext``.

    Raises
    ------
    PitchError
        For ``h = 1``, where ``Kext = -1`` is forced.
    NegativeRadicandError
        If the radicand ``1 + (1 - h^2) z^2 B / (z^2 + h^2 B)`` is negative
        on the whole interval.
    EmptyValidityError
        If the radicand is fine somewhere but ``K^2 + z^2 <= 1`` never holds.
    """
    h = float(h)
    if h < 0.0:
        raise DomainError("pitch must be non-negative")
    if h == 1.0:
        raise PitchError("pitch 1 forces K_ext = -1; the extrinsic prescription is undefined")
    sign = _check_sign(sign)
    lo, hi = _scan_interval(interval)
    const = float(const)
    if isinstance(Kext, Real) and base == 0.0:
        full = (0.0, 1.0) if interval[0] <= 0 and interval[1] >= 1 else (lo, hi)
        p = _closed_form_extrinsic(h, float(Kext), const, sign, *full)
        if p is not None:
            return PrescriptionResult(p, const, sign, p.domain)

    if isinstance(Kext, Real):
        kv = float(Kext)

        def B_of(z):
            return kv * (z * z - base * base) + const

        def Kx_of(z):
            return np.full_like(np.asarray(z, dtype=float), kv)
    else:
        Kx_of = _as_vectorized(Kext)
        anti = _Antiderivative(lambda t: t * Kx_of(t), base, lo, hi)

        def B_of(z):
            z = np.atleast_1d(np.asarray(z, dtype=float))
            return 2.0 * anti(z) + const

    h2 = h * h

    def F_of(z):
        B = B_of(z)
        return z * z * B / (z * z + h2 * B), B

    def K_of(z):
        # Where the radicand vanishes K behaves like a square root and the
        # profile's curvature K' is unbounded; heights with radicand below
        # RADICAND_FLOOR count as invalid.
        z = np.asarray(z, dtype=float)
        F, _ = F_of(z)
        rad = 1.0 + (1.0 - h2) * F
        with np.errstate(invalid="ignore"):
            return np.where(rad >= RADICAND_FLOOR, sign * np.sqrt(rad), np.nan)

    def dK_of(z):
        z = np.asarray(z, dtype=float)
        F, B = F_of(z)
        dB = 2.0 * z * Kx_of(z)
        den = z * z + h2 * B
        dF = (2.0 * z * h2 * B * B + z ** 4 * dB) / (den * den)
        return (1.0 - h2) * dF / (2.0 * K_of(z))

    zz = np.linspace(lo, hi, N_SCAN)
    with np.errstate(invalid="ignore", divide="ignore"):
        rad = 1.0 + (1.0 - h2) * F_of(zz)[0]
    if not np.any(rad >= 0.0):
        raise NegativeRadicandError("momentum radicand is negative on the whole interval")
    note = ""
    if np.any(rad < RADICAND_FLOOR):
        note = "radicand below floor on part of the interval; validity truncated"
    p, dom, note = _tabulate(K_of, dK_of, h, lo, hi, note)
    return PrescriptionResult(p, const, sign, dom, note)


def round_trip_mean(h: float, p: MomentumProfile, n_check: int = 401) -> CheckReport:
    """Recover ``p`` from its own mean curvature and measure the distance.

    ``H(z)`` is evaluated from ``p`` with the closed-form surface formulas,
    then fed back to :func:`momentum_from_mean` with the antiderivative
    based at the middle of ``p.domain``. For each sign the constant is fixed
    by matching ``A = sign K / alpha`` there; the report holds the smaller
    sup-norm distance.
    """
    h = float(h)
    lo, hi = p.domain
    zb = 0.5 * (lo + hi)

    def H_fn(z):
        z = np.asarray(z, dtype=float)
        K, dK = p._raw(z)
        return forms_from_momentum(h, z, K, dK).H

    Kb = float(p._raw(zb)[0])
    alpha_b = math.sqrt(h * h * (1.0 - Kb * Kb) + (1.0 - h * h) * zb * zb)
    best = math.inf
    best_sign = 0
    for sign in (1, -1):
        const = zb * zb * sign * Kb / alpha_b
        try:
            res = momentum_from_mean(h, H_fn, const, sign, interval=(lo, hi), base=zb)
        except EmptyValidityError:
            continue
        a, b = max(lo, res.validity[0]), min(hi, res.validity[1])
        z = np.linspace(a, b, n_check)
        dist = float(np.max(np.abs(res.momentum._raw(z)[0] - p._raw(z)[0])))
        if dist < best:
            best, best_sign = dist, sign
    return CheckReport(
        name=f"round trip mean h={h:.6g} {p.kind}{p.params}",
        max_residual=best,
        tolerance=1e-8,
        grid=f"{n_check} heights in [{lo:.6g}, {hi:.6g}]",
        details={"sign": best_sign},
    )
