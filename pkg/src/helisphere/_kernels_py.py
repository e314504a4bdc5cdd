"""Pure-Python implementations of the numerical kernels.

This module is the reference the compiled ``_kernels`` extension must match
call-for-call. It is selected automatically when the extension is missing, or
explicitly with ``HELISPHERE_PURE_PYTHON=1``.

Momentum kinds are passed as small integer codes so that both backends share
one calling convention:

    0  constant      K = p0
    1  linear        K = p0 * z + p1
    2  catenary      K = -p0 / z
    3  minimal       K = -p1 * sqrt(p0^2 + (1 - p0^2) z^2) / sqrt(z^4 + p0^2 p1^2)
"""

import heapq
import math

import numpy as np

KIND_CONSTANT = 0
KIND_LINEAR = 1
KIND_CATENARY = 2
KIND_MINIMAL = 3

# Gauss-Kronrod 7-15 abscissae and weights (QUADPACK qk15).
_XGK = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
)
_WGK = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
)
_WG = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
)

BACKEND = "python"


def _momentum_scalar(kind, p0, p1, z):
    if kind == KIND_CONSTANT:
        return p0, 0.0
    if kind == KIND_LINEAR:
        return p0 * z + p1, p0
    if kind == KIND_CATENARY:
        return -p0 / z, p0 / (z * z)
    if kind == KIND_MINIMAL:
        if p1 == 0.0:
            return 0.0, 0.0
        h2 = p0 * p0
        P = h2 + (1.0 - h2) * z * z
        Q = z ** 4 + h2 * p1 * p1
        sp = math.sqrt(P)
        sq = math.sqrt(Q)
        K = -p1 * sp / sq
        dK = -p1 * ((1.0 - h2) * z * Q - 2.0 * z ** 3 * P) / (sp * sq * Q)
        return K, dK
    raise ValueError(f"unknown momentum kind {kind}")


def momentum_eval(kind, p0, p1, z):
    """Evaluate (K, K') of an analytic momentum kind on an array of heights."""
    z = np.asarray(z, dtype=float)
    if kind == KIND_CONSTANT:
        return np.full_like(z, p0), np.zeros_like(z)
    if kind == KIND_LINEAR:
        return p0 * z + p1, np.full_like(z, p0)
    if kind == KIND_CATENARY:
        return -p0 / z, p0 / (z * z)
    if kind == KIND_MINIMAL:
        if p1 == 0.0:
            return np.zeros_like(z), np.zeros_like(z)
        h2 = p0 * p0
        P = h2 + (1.0 - h2) * z * z
        Q = z ** 4 + h2 * p1 * p1
        sp = np.sqrt(P)
        sq = np.sqrt(Q)
        K = -p1 * sp / sq
        dK = -p1 * ((1.0 - h2) * z * Q - 2.0 * z ** 3 * P) / (sp * sq * Q)
        return K, dK
    raise ValueError(f"unknown momentum kind {kind}")


def profile_rhs(kind, p0, p1, s, y):
    """Right-hand side of the second-order profile system.

    State is ``(z, dz/ds, lambda)``; ``z'' = -z - K K'`` and
    ``lambda' = K / (z^2 - 1)``.
    """
    z = y[0]
    K, dK = _momentum_scalar(kind, p0, p1, z)
    return np.array([y[1], -z - K * dK, K / (z * z - 1.0)])


def _rk4_march_core(f, y0, targets, max_step):
    targets = np.asarray(targets, dtype=float)
    out = np.empty((targets.size, 3))
    y0 = [float(v) for v in y0]
    for direction in (1.0, -1.0):
        idx = np.nonzero(targets >= 0.0)[0] if direction > 0 else np.nonzero(targets < 0.0)[0]
        if idx.size == 0:
            continue
        order = idx[np.argsort(targets[idx] * direction)]
        s = 0.0
        y = list(y0)
        for i in order:
            span = targets[i] - s
            n = max(1, int(math.ceil(abs(span) / max_step)))
            dt = span / n
            for _ in range(n):
                k1 = f(s, y)
                y2 = [y[j] + 0.5 * dt * k1[j] for j in range(3)]
                k2 = f(s + 0.5 * dt, y2)
                y3 = [y[j] + 0.5 * dt * k2[j] for j in range(3)]
                k3 = f(s + 0.5 * dt, y3)
                y4 = [y[j] + dt * k3[j] for j in range(3)]
                k4 = f(s + dt, y4)
                y = [y[j] + dt * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]) / 6.0 for j in range(3)]
                s += dt
            s = targets[i]
            out[i] = y
    return out


def rk4_march(kind, p0, p1, y0, targets, max_step):
    """March the profile system with fixed-step RK4 to each target offset.

    Offsets are measured from the state ``y0``; both signs are allowed. Each
    gap between consecutive targets is split into equal substeps no longer
    than ``max_step``. The result is a deterministic, smooth function of the
    targets, which is what finite-difference stencils need.
    """

    def f(s, y):
        K, dK = _momentum_scalar(kind, p0, p1, y[0])
        return (y[1], -y[0] - K * dK, K / (y[0] * y[0] - 1.0))

    return _rk4_march_core(f, y0, targets, max_step)


def rk4_march_generic(kd, y0, targets, max_step):
    """As :func:`rk4_march` for an arbitrary ``kd(z) -> (K, K')`` callable."""

    def f(s, y):
        K, dK = kd(y[0])
        return (y[1], -y[0] - K * dK, K / (y[0] * y[0] - 1.0))

    return _rk4_march_core(f, y0, targets, max_step)


def _catenary_integrand(t, sb, cb, s2):
    # 1 -/+ cos(b) sin(2t) rewritten without cancellation near the extrema.
    a = t - 0.25 * math.pi
    sa = math.sin(a)
    ca = math.cos(a)
    lo = s2 + 2.0 * cb * sa * sa
    hi = s2 + 2.0 * cb * ca * ca
    return math.sqrt(2.0) * sb / (lo * math.sqrt(hi))


def _gk15(a, b, sb, cb, s2):
    c = 0.5 * (a + b)
    hw = 0.5 * (b - a)
    fc = _catenary_integrand(c, sb, cb, s2)
    resk = fc * _WGK[7]
    resg = fc * _WG[3]
    for j in range(7):
        dx = hw * _XGK[j]
        fs = _catenary_integrand(c - dx, sb, cb, s2) + _catenary_integrand(c + dx, sb, cb, s2)
        resk += _WGK[j] * fs
        if j % 2 == 1:
            resg += _WG[j // 2] * fs
    return resk * hw, abs((resk - resg) * hw)


def catenary_breakpoints(a, b):
    """Panel edges for [a, b] with a break at every extremum t = pi/4 + k pi/2."""
    half = 0.5 * math.pi
    k0 = math.ceil((a - 0.25 * math.pi) / half)
    k1 = math.floor((b - 0.25 * math.pi) / half)
    pts = [a]
    for k in range(k0, k1 + 1):
        p = 0.25 * math.pi + k * half
        if a < p < b:
            pts.append(p)
    pts.append(b)
    return pts


def catenary_lambda(beta, a, b, rtol, atol, max_intervals=5000):
    """Adaptive Gauss-Kronrod integral of the catenary longitude rate on [a, b].

    For small beta the integrand peaks sharply (width ~ beta) at
    t = pi/4 + k pi and less sharply half a period later, so all extrema are
    panel edges from the start. Refinement is global: the panel with the
    largest error estimate is bisected until the summed estimate meets
    ``max(atol, rtol * |value|)``. Returns ``(value, error, ok)``; ``ok`` is
    False when the panel budget runs out first.
    """
    if a == b:
        return 0.0, 0.0, True
    sign = 1.0
    if b < a:
        a, b = b, a
        sign = -1.0
    sb = math.sin(beta)
    cb = math.cos(beta)
    s2 = 2.0 * math.sin(0.5 * beta) ** 2
    pts = catenary_breakpoints(a, b)
    heap = []
    total = 0.0
    err = 0.0
    for lo, hi in zip(pts[:-1], pts[1:]):
        val, e = _gk15(lo, hi, sb, cb, s2)
        heapq.heappush(heap, (-e, lo, hi, val))
        total += val
        err += e
    while err > max(atol, rtol * abs(total)):
        if len(heap) >= max_intervals:
            return sign * total, err, False
        ne, lo, hi, val = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            # Panel cannot be split further in double precision.
            return sign * total, err, False
        v1, e1 = _gk15(lo, mid, sb, cb, s2)
        v2, e2 = _gk15(mid, hi, sb, cb, s2)
        heapq.heappush(heap, (-e1, lo, mid, v1))
        heapq.heappush(heap, (-e2, mid, hi, v2))
        total += v1 + v2 - val
        err += e1 + e2 + ne
    # Re-sum to shed drift from the running updates.
    total = math.fsum(item[3] for item in heap)
    return sign * total, err, True


def helicoid_immersion(h, x, y, z, t):
    """Helicoidal immersion on the grid ``profile samples x t``; shape (n, m, 4)."""
    x = np.asarray(x, dtype=float)[:, None]
    y = np.asarray(y, dtype=float)[:, None]
    z = np.asarray(z, dtype=float)[:, None]
    t = np.asarray(t, dtype=float)[None, :]
    ch = np.cos(h * t)
    sh = np.sin(h * t)
    out = np.empty((x.shape[0], t.shape[1], 4))
    out[..., 0] = x * ch - y * sh
    out[..., 1] = x * sh + y * ch
    out[..., 2] = z * np.cos(t)
    out[..., 3] = z * np.sin(t)
    return out


def helicoid_forms(h, z, K, dK):
    """Closed-form fundamental forms and curvatures of a helicoidal surface.

    Rows of the returned (10, n) array: g11, g12, g22, s11, s12, s22, alpha,
    H, K_ext, K_G.
    """
    z = np.asarray(z, dtype=float)
    K = np.asarray(K, dtype=float)
    dK = np.asarray(dK, dtype=float)
    h2 = h * h
    z2 = z * z
    one_k2 = 1.0 - K * K
    a2 = h2 * one_k2 + (1.0 - h2) * z2
    alpha = np.sqrt(a2)
    out = np.empty((10, z.size))
    out[0] = 1.0
    out[1] = -h * K
    out[2] = h2 + (1.0 - h2) * z2
    out[3] = z * dK / alpha
    out[4] = h * one_k2 / alpha
    out[5] = (1.0 - h2) * z2 * K / alpha
    out[6] = alpha
    out[7] = 0.5 * ((h2 + (1.0 - h2) * z2) * z * dK + (2.0 * h2 * one_k2 + (1.0 - h2) * z2) * K) / (a2 * alpha)
    out[8] = ((1.0 - h2) * z2 * z * K * dK - h2 * one_k2 * one_k2) / (a2 * a2)
    out[9] = 1.0 + out[8]
    return out
