"""Independent numerical cross-checks.

Nothing here uses the closed-form curvature formulas of
:mod:`helisphere.surface`. Fundamental forms come from finite differences of
the raw immersion, Gauss curvature from the metric alone (Brioschi formula),
and the Otsuki and Brendle-Kusner identifications from their own ODEs.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import solve_ivp

from .errors import ConvergenceError, DegenerateError, DomainError
from .families import CatenaryParams, catenary_height, catenary_longitude
from .momentum import momentum_of_samples
from .report import CheckReport
from .surface import FormsAtPoint, HelicoidalSurface


def _local_sheet(surf, s0, t0, s_off, t_off):
    # Immersion on the tensor grid (s0 + s_off) x (t0 + t_off); shape (ns, nt, 4).
    pos, _ = surf.profile.local(s0, np.asarray(s_off, dtype=float))
    h = surf.pitch
    t = t0 + np.asarray(t_off, dtype=float)
    x, y, z = pos[:, 0:1], pos[:, 1:2], pos[:, 2:3]
    ch, sh = np.cos(h * t)[None], np.sin(h * t)[None]
    ct, st = np.cos(t)[None], np.sin(t)[None]
    return np.stack([x * ch - y * sh, x * sh + y * ch, z * ct, z * st], axis=-1)


def _cross4(a, b, c):
    """Vector orthogonal to a, b, c in R^4 (cofactor expansion)."""
    m = np.stack([a, b, c])
    out = np.empty(4)
    for i in range(4):
        minor = np.delete(m, i, axis=1)
        out[i] = (-1) ** i * np.linalg.det(minor)
    return out


def fd_forms(surf: HelicoidalSurface, s: float, t: float, step: float = 1e-5) -> FormsAtPoint:
    """Fundamental forms at ``(s, t)`` by finite differences of the immersion.

    First derivatives use central differences with ``step``. Second
    derivatives use the larger step ``sqrt(step)`` and one Richardson
    extrapolation, which keeps rounding error at the level of the first
    derivatives. The normal is the 4-D cross product of ``X``, ``X_s`` and
    ``X_t``, oriented like the closed-form normal.
    """
    if not (1e-6 <= step <= 1e-3):
        raise DomainError("step must lie in [1e-6, 1e-3]")
    d1 = step
    d2 = math.sqrt(step)
    offs = np.array([-d2, -0.5 * d2, -d1, 0.0, d1, 0.5 * d2, d2])
    X = _local_sheet(surf, s, t, offs, offs)
    c = 3  # index of the zero offset
    i_m1, i_p1 = 2, 4
    i_mh, i_ph = 1, 5
    i_m2, i_p2 = 0, 6

    X0 = X[c, c]
    Xs = (X[i_p1, c] - X[i_m1, c]) / (2 * d1)
    Xt = (X[c, i_p1] - X[c, i_m1]) / (2 * d1)

    def second(ip, im, hstep, axis):
        if axis == 0:
            return (X[ip, c] - 2 * X0 + X[im, c]) / hstep ** 2
        return (X[c, ip] - 2 * X0 + X[c, im]) / hstep ** 2

    def mixed(ip, im, hstep):
        return (X[ip, ip] - X[ip, im] - X[im, ip] + X[im, im]) / (4 * hstep ** 2)

    Xss = (4 * second(i_ph, i_mh, 0.5 * d2, 0) - second(i_p2, i_m2, d2, 0)) / 3
    Xtt = (4 * second(i_ph, i_mh, 0.5 * d2, 1) - second(i_p2, i_m2, d2, 1)) / 3
    Xst = (4 * mixed(i_ph, i_mh, 0.5 * d2) - mixed(i_p2, i_m2, d2)) / 3

    g11, g12, g22 = Xs @ Xs, Xs @ Xt, Xt @ Xt
    det_g = g11 * g22 - g12 * g12
    if det_g < 1e-20:
        raise DegenerateError("metric is singular at this point")
    nu = _cross4(X0, Xs, Xt)
    nu /= np.linalg.norm(nu)
    if np.linalg.det(np.stack([X0, Xs, Xt, nu])) > 0:
        nu = -nu
    s11, s12, s22 = Xss @ nu, Xst @ nu, Xtt @ nu
    H = 0.5 * (g11 * s22 - 2 * g12 * s12 + g22 * s11) / det_g
    K_ext = (s11 * s22 - s12 * s12) / det_g
    return FormsAtPoint(g11, g12, g22, s11, s12, s22, math.sqrt(det_g), H, K_ext, 1.0 + K_ext)


def _metric_sheet(surf, s, t, spacing, delta):
    # E, F, G on the 5x5 stencil s + i*spacing, t + j*spacing (i, j = -2..2),
    # each from fourth-order central differences with step delta.
    base = spacing * np.arange(-2, 3)
    dd = delta * np.array([-2.0, -1.0, 1.0, 2.0])
    s_off = np.concatenate([base[:, None] + np.concatenate([[0.0], dd])[None, :]]).ravel()
    # layout per stencil row: [0, -2d, -d, d, 2d]
    X = _local_sheet(surf, s, t, s_off, s_off)
    X = X.reshape(5, 5, 5, 5, 4)  # (i, a, j, b, 4): s = base_i + off_a, t = base_j + off_b
    w = np.array([1.0, -8.0, 8.0, -1.0]) / (12 * delta)
    Xs = np.einsum("k,ikjc->ijc", w, X[:, 1:, :, 0, :])
    Xt = np.einsum("k,ijkc->ijc", w, X[:, 0, :, 1:, :])
    E = np.einsum("ijc,ijc->ij", Xs, Xs)
    F = np.einsum("ijc,ijc->ij", Xs, Xt)
    G = np.einsum("ijc,ijc->ij", Xt, Xt)
    return E, F, G


def intrinsic_gauss(surf: HelicoidalSurface, s: float, t: float,
                    spacing: float = 1e-2, delta: float = 1e-3) -> float:
    """Gauss curvature from the metric alone, via the Brioschi formula.

    The metric is sampled on a 5x5 stencil with the given ``spacing``; its
    derivatives use fourth-order central differences.
    """
    E, F, G = _metric_sheet(surf, s, t, spacing, delta)
    d1 = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / (12 * spacing)
    d2 = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / (12 * spacing ** 2)

    def ds(M):
        return d1 @ M[:, 2]

    def dt(M):
        return M[2, :] @ d1

    E0, F0, G0 = E[2, 2], F[2, 2], G[2, 2]
    E_s, E_t = ds(E), dt(E)
    F_s, F_t = ds(F), dt(F)
    G_s, G_t = ds(G), dt(G)
    E_tt = E[2, :] @ d2
    G_ss = d2 @ G[:, 2]
    F_st = d1 @ F @ d1
    a = np.array([
        [-0.5 * E_tt + F_st - 0.5 * G_ss, 0.5 * E_s, F_s - 0.5 * E_t],
        [F_t - 0.5 * G_s, E0, F0],
        [0.5 * G_t, F0, G0],
    ])
    b = np.array([
        [0.0, 0.5 * E_t, 0.5 * G_s],
        [0.5 * E_t, E0, F0],
        [0.5 * G_s, F0, G0],
    ])
    return float((np.linalg.det(a) - np.linalg.det(b)) / (E0 * G0 - F0 * F0) ** 2)


# -- Otsuki tori --------------------------------------------------------------


def otsuki_first_integral(h, hp):
    """``h (1 - h^2 - h'^2) / sqrt(1 - h^2)``, conserved by the support-function ODE."""
    return h * (1.0 - h * h - hp * hp) / np.sqrt(1.0 - h * h)


def _otsuki_rhs(form):
    if form == "sum":
        # 2h(1-h^2) h'' + h'^2 + (1-h^2)(2h^2-1) = 0
        def rhs(th, y):
            h, hp = y
            return [hp, ((1.0 - h * h) * (1.0 - 2.0 * h * h) - hp * hp) / (2.0 * h * (1.0 - h * h))]
    elif form == "product":
        # 2h(1-h^2) h'' + h'^2 (1-h^2)(2h^2-1) = 0
        def rhs(th, y):
            h, hp = y
            return [hp, -hp * hp * (2.0 * h * h - 1.0) / (2.0 * h)]
    else:
        raise ValueError(f"unknown Otsuki ODE form {form!r}")
    return rhs


def _integrate_otsuki(h0, span, form):
    sol = solve_ivp(_otsuki_rhs(form), span, [h0, 0.0], method="DOP853",
                    rtol=1e-12, atol=1e-14, dense_output=True)
    if not sol.success:
        raise ConvergenceError(f"Otsuki ODE integration failed: {sol.message}")
    return sol


def otsuki_check(h0: float, span=(0.0, 10.0), n_samples=801, form="sum",
                 tolerance=1e-8) -> CheckReport:
    """Integrate the Otsuki support-function ODE and test two claims.

    1. The first integral stays at ``c = h0 sqrt(1 - h0^2)``; its drift is
       ``max_residual``.
    2. The curve ``(h sin th + h' cos th, h' sin th - h cos th, sqrt(1 - h^2 - h'^2))``
       carries momentum ``-c / z``; the sup error goes to
       ``details["momentum_residual"]``.

    ``form="sum"`` adds ``h'^2`` and ``(1 - h^2)(2h^2 - 1)``; its solutions
    move and conserve the first integral. ``form="product"`` multiplies the
    two, so from ``h'(0) = 0`` its solution is constant. The product form's
    drift and its largest excursion ``max |h - h0|`` are always reported in
    ``details`` so the difference stays visible.
    """
    h0 = float(h0)
    if not (0.0 < h0 <= 1.0 / math.sqrt(2.0) + 1e-15):
        raise DomainError("h0 must lie in (0, 1/sqrt(2)]")
    c = h0 * math.sqrt(1.0 - h0 * h0)
    th = np.linspace(span[0], span[1], n_samples)
    sol = _integrate_otsuki(h0, span, form)
    h, hp = sol.sol(th)
    if np.any(h <= 0.0) or np.any(h >= 1.0):
        raise DomainError("support function left (0, 1)")
    drift = float(np.max(np.abs(otsuki_first_integral(h, hp) - c)))

    hpp = np.array([_otsuki_rhs(form)(0.0, (a, b))[1] for a, b in zip(h, hp)])
    zz = np.sqrt(np.maximum(1.0 - h * h - hp * hp, 0.0))
    pos = np.stack([h * np.sin(th) + hp * np.cos(th), hp * np.sin(th) - h * np.cos(th), zz], axis=-1)
    fac = h + hpp
    with np.errstate(divide="ignore", invalid="ignore"):
        vel = np.stack([fac * np.cos(th), fac * np.sin(th), -fac * hp / zz], axis=-1)
    speed = np.linalg.norm(vel, axis=1)
    ok = speed > 1e-12
    tan = vel[ok] / speed[ok][:, None]
    K = momentum_of_samples((pos[ok], tan))
    mom_res = float(np.max(np.abs(K + c / zz[ok]))) if ok.any() else float("nan")

    product_drift, product_motion = _product_form_diagnostics(h0, span, th, c)
    return CheckReport(
        name=f"otsuki h0={h0:.6g}",
        max_residual=max(drift, mom_res) if np.isfinite(mom_res) else drift,
        tolerance=tolerance,
        grid=f"theta in [{span[0]}, {span[1]}], {n_samples} samples",
        details={"c": c, "first_integral_drift": drift, "momentum_residual": mom_res,
                 "form": form, "product_form_drift": product_drift,
                 "product_form_max_motion": product_motion},
    )


def _product_form_diagnostics(h0, span, th, c):
    # The product form conserves the first integral only because, from
    # h'(0) = 0, its solution never moves; report both facts.
    sol = _integrate_otsuki(h0, span, "product")
    h, hp = sol.sol(th)
    drift = float(np.max(np.abs(otsuki_first_integral(h, hp) - c)))
    return drift, float(np.max(np.abs(h - h0)))


# -- Brendle-Kusner tori -----------------------------------------------------


def brendle_kusner_residual(r, dr_dt, C, form="squared"):
    """Residual of the radial ODE for ``r(t)``.

    ``squared``: ``r'^2 / (r^4 (1 - r^2)^2) + 1 / (r^2 (1 - r^2)) - 4 / C^2``.
    ``single`` has ``(1 - r^2)`` to the first power in the first term.
    """
    r = np.asarray(r, dtype=float)
    q = 1.0 - r * r
    power = 2 if form == "squared" else 1
    if form not in ("squared", "single"):
        raise ValueError(f"unknown form {form!r}")
    return dr_dt ** 2 / (r ** 4 * q ** power) + 1.0 / (r * r * q) - 4.0 / C ** 2


def brendle_kusner_check(beta: float, C: float | None = None, n_samples=64,
                         form="squared", tolerance=1e-5) -> CheckReport:
    """Test the Brendle-Kusner radial ODE along the catenary of parameter ``beta``.

    ``r = sqrt(1 - z^2)`` is re-parametrized by the longitude ``t = lam(s)``
    and ``dr/dt = (dr/ds) / (dlam/ds)``, both by fourth-order differences of
    the sampled catenary. With ``C = sin(beta)`` (the default) the residual
    vanishes; any other ``C`` leaves a residual ``4 / sin^2(beta) - 4 / C^2``.
    """
    p = CatenaryParams(float(beta))
    C = math.sin(p.beta) if C is None else float(C)
    s = np.linspace(0.0, math.pi, n_samples, endpoint=False) + 0.5 * math.pi / n_samples
    d = 1e-3
    offs = np.array([-2.0, -1.0, 1.0, 2.0]) * d
    w = np.array([1.0, -8.0, 8.0, -1.0]) / (12 * d)
    ss = (s[:, None] + offs[None, :]).ravel()
    r_off = np.sqrt(1.0 - catenary_height(p.beta, ss) ** 2).reshape(-1, 4)
    lam_off = catenary_longitude(p.beta, ss).reshape(-1, 4)
    r = np.sqrt(1.0 - catenary_height(p.beta, s) ** 2)
    dr_dt = (r_off @ w) / (lam_off @ w)
    res = brendle_kusner_residual(r, dr_dt, C, form)
    single = brendle_kusner_residual(r, dr_dt, C, "single")
    return CheckReport(
        name=f"brendle-kusner beta={p.beta:.6g} C={C:.6g}",
        max_residual=float(np.max(np.abs(res))),
        tolerance=tolerance,
        grid=f"s in (0, pi), {n_samples} samples",
        details={"C": C, "form": form, "single_power_residual": float(np.max(np.abs(single)))},
    )


def clifford_brendle_kusner_residual(C: float = 1.0) -> float:
    """Residual for the constant solution ``r = 1/sqrt(2)``; zero exactly when ``C = 1``."""
    return float(abs(brendle_kusner_residual(np.array([1.0 / math.sqrt(2.0)]), 0.0, C)[0]))
