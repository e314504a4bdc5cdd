"""Verification suites, one per headline property of the library.

Each suite returns a list of :class:`~helisphere.report.CheckReport`. The
command line runs them through ``helisphere verify``.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .associated import (AssociatedParams, conjugate_pitches, isometry_pullback,
                         params_from_associated, verify_association)
from .families import (CatenaryParams, SmallCircleParams, catenary, closure_function,
                       closure_residual, great_circle, small_circle, solve_beta_for_rotation)
from .momentum import MomentumProfile, momentum_of_samples, reconstruct_curve
from .oracles import brendle_kusner_check, fd_forms, intrinsic_gauss, otsuki_check
from .prescribe import round_trip_mean
from .report import CheckReport
from .surface import HelicoidalSurface, forms, forms_from_momentum

MIN_PITCHES = (0.0, 0.3, 0.7, 1.5, 3.0)
MIN_CONSTANTS = (0.0, 0.1, 0.25, 0.4, 0.49)


def _interior(lo, hi, n):
    return np.linspace(lo, hi, n + 2)[1:-1]


def minimal_profile_curve(h: float, c: float, length: float = 1.5):
    """Profile of the minimal helicoidal surface ``(h, c)`` as a curve.

    ``c = 0`` gives ``K = 0``: the great circle through the pole, built in
    closed form. Otherwise the curve is reconstructed from mid-band.
    """
    if c == 0.0:
        return great_circle(0.5 * math.pi, s_span=(0.1, 0.5 * math.pi - 0.1))
    p = MomentumProfile.minimal_helicoidal(h, c)
    lo, hi = p.domain
    return reconstruct_curve(p, (0.0, length), 0.5 * (lo + hi))


def minimality_suite(pitches=MIN_PITCHES, constants=MIN_CONSTANTS, n_heights=201,
                     fd_samples=((0.3, 0.4), (0.7, 2.0), (1.1, 4.5))):
    """``|H|`` of the minimal helicoidal family, closed form and by finite differences."""
    reports = []
    for h in pitches:
        for c in constants:
            p = MomentumProfile.minimal_helicoidal(h, c)
            z = _interior(*p.domain, n_heights)
            K, dK = p._raw(z)
            H = np.asarray(forms_from_momentum(h, z, K, dK).H)
            reports.append(CheckReport(
                f"minimal closed form h={h:g} c={c:g}", float(np.max(np.abs(H))), 1e-10,
                grid=f"{n_heights} heights in the valid band"))

            curve = minimal_profile_curve(h, c)
            surf = HelicoidalSurface(h, curve)
            a, b = curve.s_span
            H_fd = []
            for u, t in fd_samples:
                s = a + (b - a) * u / 1.5 if c == 0.0 else u
                H_fd.append(abs(fd_forms(surf, s, t).H))
            reports.append(CheckReport(
                f"minimal finite differences h={h:g} c={c:g}", max(H_fd), 1e-5,
                grid=f"{len(fd_samples)} (s, t) points"))
    return reports


def closure_function_suite(n: int = 100):
    """Monotonicity and limiting values of the closure function ``T``."""
    betas = np.linspace(1e-3, 0.5 * math.pi - 1e-3, n)
    T = np.array([closure_function(b) for b in betas])
    worst_step = float(np.max(T[:-1] - T[1:]))
    lo, hi = T[0], T[-1]
    return [
        # Residuals below are <= 0 exactly when the claim holds, so tolerance 0.
        CheckReport("closure function strictly increasing", worst_step, 0.0,
                    grid=f"{n} betas in [1e-3, pi/2 - 1e-3]",
                    details={"largest_decrease": worst_step}),
        CheckReport("closure function T(1e-3) in (0.5, 0.51)", max(0.5 - lo, lo - 0.51), 0.0,
                    details={"T": lo}),
        CheckReport("closure function T(pi/2 - 1e-3) in (0.705, sqrt(2)/2)",
                    max(0.705 - hi, hi - math.sqrt(2.0) / 2.0), 0.0, details={"T": hi}),
    ]


def closed_catenary_suite(qs=("2/3", "3/5", "5/8")):
    """Solve ``T(beta_q) = q`` and check that the catenary closes in space."""
    reports = []
    for q in qs:
        frac = Fraction(q)
        params = solve_beta_for_rotation(frac)
        T = closure_function(params.beta)
        reports.append(CheckReport(f"closure root q={q}", abs(T - float(frac)), 1e-10,
                                   details={"beta": params.beta, "T": T}))
        reports.append(CheckReport(f"ambient closure q={q}", closure_residual(params, frac), 1e-7,
                                   grid=f"s in [0, pi], shift {frac.denominator} pi",
                                   details={"beta": params.beta}))
    return reports


def conjugation_suite(betas=(math.pi / 6, math.pi / 4, math.pi / 3)):
    """Catenoid metric against the pulled-back Lawson helicoid metric, both pitches."""
    return [isometry_pullback(b, h) for b in betas for h in conjugate_pitches(b)]


def association_suite(betas=None, thetas=None):
    """Transported forms of the associated family plus the conjugate parameters."""
    betas = np.linspace(0.2, 1.45, 6) if betas is None else betas
    thetas = np.linspace(0.0, math.pi, 8)[1:-1] if thetas is None else thetas
    reports = [verify_association(AssociatedParams(b, t)) for b in betas for t in thetas]
    for b in betas:
        hp = params_from_associated(AssociatedParams(b, 0.5 * math.pi))
        err = max(abs(hp.h - math.tan(0.5 * b)), abs(hp.c))
        reports.append(CheckReport(f"conjugate parameters beta={b:.6g}", err, 1e-10,
                                   details={"h": hp.h, "c": hp.c}))
    return reports


def _random_surfaces(rng):
    """A mix of profile families paired with random pitches."""
    out = []
    for _ in range(2):
        th = rng.uniform(0.3, 1.2)
        out.append((great_circle(th), rng.uniform(0.0, 3.0)))
    k0 = rng.uniform(0.2, 1.5)
    out.append((small_circle(SmallCircleParams(k0, -0.5 * k0)), rng.uniform(0.0, 3.0)))
    beta = rng.uniform(0.2, 1.4)
    out.append((catenary(CatenaryParams(beta)), 0.0))
    h = rng.uniform(0.1, 3.0)
    c = rng.uniform(0.05, 0.45)
    out.append((minimal_profile_curve(h, c), h))
    p = MomentumProfile.linear(0.6, 0.1)
    lo, hi = p.domain
    out.append((reconstruct_curve(p, (0.0, 1.0), 0.5 * (lo + hi)), rng.uniform(0.0, 3.0)))
    return out


def gauss_suite(seed: int = 7, points_per_surface: int = 4):
    """Brioschi curvature of the metric against ``1 + K_ext``; pitch 1 is flat."""
    rng = np.random.default_rng(seed)
    worst, worst_flat, n = 0.0, 0.0, 0
    for curve, h in _random_surfaces(rng):
        a, b = curve.s_span
        w = b - a
        for _ in range(points_per_surface):
            s = rng.uniform(a + 0.1 * w, b - 0.1 * w)
            t = rng.uniform(0.0, 2.0 * math.pi)
            KG = intrinsic_gauss(HelicoidalSurface(h, curve), s, t)
            worst = max(worst, abs(KG - (1.0 + forms(HelicoidalSurface(h, curve), s).K_ext)))
            worst_flat = max(worst_flat, abs(intrinsic_gauss(HelicoidalSurface(1.0, curve), s, t)))
            n += 1
    return [
        CheckReport("gauss equation K_G = 1 + K_ext", worst, 1e-4,
                    grid=f"{n} random (s, t) points", details={"seed": seed}),
        CheckReport("pitch 1 surfaces are flat", worst_flat, 1e-4,
                    grid=f"{n} random (s, t) points", details={"seed": seed}),
    ]


def otsuki_suite(h0s=(0.3, 0.5, 0.65)):
    """First-integral drift and the ``-c/z`` momentum of Otsuki curves."""
    reports = []
    for h0 in h0s:
        r = otsuki_check(h0)
        d = r.details
        reports.append(CheckReport(f"otsuki first integral h0={h0:g}", d["first_integral_drift"],
                                   1e-8, grid=r.grid, details=d))
        reports.append(CheckReport(f"otsuki momentum -c/z h0={h0:g}", d["momentum_residual"],
                                   1e-7, grid=r.grid, details={"c": d["c"]}))
    return reports


def brendle_kusner_suite(betas=(math.pi / 6, math.pi / 4, math.pi / 3)):
    """The radial ODE with ``C = sin(beta)``, and a wrong-constant control."""
    reports = []
    for b in betas:
        reports.append(brendle_kusner_check(b))
        bad = brendle_kusner_check(b, C=1.1 * math.sin(b))
        # Passes when the wrong constant leaves a residual above 0.1.
        reports.append(CheckReport(f"brendle-kusner control beta={b:.6g}",
                                   0.1 - bad.max_residual, 0.0, grid=bad.grid,
                                   details={"residual": bad.max_residual, "C": bad.details["C"]}))
    return reports


ROUND_TRIP_PROFILES = (
    (MomentumProfile.constant, (-0.4,), 0.3),
    (MomentumProfile.linear, (0.5, 0.2), None),
    (MomentumProfile.catenary, (0.3,), None),
    (MomentumProfile.minimal_helicoidal, (0.5, 0.3), None),
    (MomentumProfile.minimal_helicoidal, (2.0, 0.45), None),
)
PRESCRIBE_PROFILES = (
    (0.0, MomentumProfile.catenary, (0.3,)),
    (0.5, MomentumProfile.minimal_helicoidal, (0.5, 0.3)),
    (0.0, MomentumProfile.linear, (0.8, 0.0)),
    (2.0, MomentumProfile.minimal_helicoidal, (2.0, 0.45)),
    (0.3, MomentumProfile.linear, (0.5, 0.2)),
)


def roundtrip_suite(length: float = 2.0, n: int = 401):
    """Momentum recovered from reconstructed curves, and mean-curvature round trips."""
    reports = []
    for make, args, z0 in ROUND_TRIP_PROFILES:
        p = make(*args)
        lo, hi = p.domain
        z0 = 0.5 * (lo + hi) if z0 is None else z0
        curve = reconstruct_curve(p, (0.0, length), z0)
        smp = curve.sample(n)
        err = float(np.max(np.abs(momentum_of_samples((smp.pos, smp.tan)) - p(smp.z)[0])))
        reports.append(CheckReport(f"momentum round trip {p.kind}{args}", err, 1e-8,
                                   grid=f"{n} samples on s in [0, {length:g}]"))
    for h, make, args in PRESCRIBE_PROFILES:
        reports.append(round_trip_mean(h, make(*args)))
    return reports


SUITES = {
    "minimality": minimality_suite,
    "closure": closure_function_suite,
    "catenaries": closed_catenary_suite,
    "conjugation": conjugation_suite,
    "association": association_suite,
    "gauss": gauss_suite,
    "otsuki": otsuki_suite,
    "brendle-kusner": brendle_kusner_suite,
    "roundtrip": roundtrip_suite,
}


def run_suite(name: str):
    """Run one suite by name, or every suite for ``"all"``."""
    if name == "all":
        return [r for fn in SUITES.values() for r in fn()]
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from all, {', '.join(SUITES)}")
    return SUITES[name]()
