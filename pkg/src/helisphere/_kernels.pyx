# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numerical kernels.

Mirrors ``_kernels_py`` exactly; see that module for the calling convention.
"""

import heapq
import math

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, sin, cos, fabs, ceil

cnp.import_array()

BACKEND = "cython"

cdef enum:
    KIND_CONSTANT = 0
    KIND_LINEAR = 1
    KIND_CATENARY = 2
    KIND_MINIMAL = 3

cdef double[8] XGK = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
]
cdef double[8] WGK = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
]
cdef double[4] WG = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
]


cdef inline int _mom(int kind, double p0, double p1, double z, double* K, double* dK) nogil:
    cdef double h2, P, Q, sp, sq
    if kind == KIND_CONSTANT:
        K[0] = p0
        dK[0] = 0.0
    elif kind == KIND_LINEAR:
        K[0] = p0 * z + p1
        dK[0] = p0
    elif kind == KIND_CATENARY:
        K[0] = -p0 / z
        dK[0] = p0 / (z * z)
    elif kind == KIND_MINIMAL:
        if p1 == 0.0:
            K[0] = 0.0
            dK[0] = 0.0
            return 0
        h2 = p0 * p0
        P = h2 + (1.0 - h2) * z * z
        Q = z * z * z * z + h2 * p1 * p1
        sp = sqrt(P)
        sq = sqrt(Q)
        K[0] = -p1 * sp / sq
        dK[0] = -p1 * ((1.0 - h2) * z * Q - 2.0 * z * z * z * P) / (sp * sq * Q)
    else:
        return -1
    return 0


def momentum_eval(int kind, double p0, double p1, z):
    cdef cnp.ndarray[double, ndim=1] zz = np.ascontiguousarray(z, dtype=float).ravel()
    cdef Py_ssize_t n = zz.shape[0], i
    cdef cnp.ndarray[double, ndim=1] K = np.empty(n)
    cdef cnp.ndarray[double, ndim=1] dK = np.empty(n)
    cdef double k, dk
    if kind < 0 or kind > 3:
        raise ValueError(f"unknown momentum kind {kind}")
    for i in range(n):
        _mom(kind, p0, p1, zz[i], &k, &dk)
        K[i] = k
        dK[i] = dk
    shape = np.shape(z)
    return K.reshape(shape), dK.reshape(shape)


def profile_rhs(int kind, double p0, double p1, double s, y):
    cdef double z = y[0], zd = y[1], k, dk
    if _mom(kind, p0, p1, z, &k, &dk) < 0:
        raise ValueError(f"unknown momentum kind {kind}")
    return np.array([zd, -z - k * dk, k / (z * z - 1.0)])


cdef inline void _rhs(int kind, double p0, double p1, double* y, double* out) nogil:
    cdef double k, dk
    _mom(kind, p0, p1, y[0], &k, &dk)
    out[0] = y[1]
    out[1] = -y[0] - k * dk
    out[2] = k / (y[0] * y[0] - 1.0)


def rk4_march(int kind, double p0, double p1, y0, targets, double max_step):
    cdef cnp.ndarray[double, ndim=1] tg = np.ascontiguousarray(targets, dtype=float).ravel()
    cdef Py_ssize_t m = tg.shape[0], i, j, step, nsub
    cdef cnp.ndarray[double, ndim=2] out = np.empty((m, 3))
    cdef double y[3]
    cdef double yt[3]
    cdef double k1[3]
    cdef double k2[3]
    cdef double k3[3]
    cdef double k4[3]
    cdef double s, span, dt
    cdef cnp.ndarray[Py_ssize_t, ndim=1] order
    if kind < 0 or kind > 3:
        raise ValueError(f"unknown momentum kind {kind}")
    for direction in (1, -1):
        if direction > 0:
            idx = np.nonzero(tg >= 0.0)[0]
        else:
            idx = np.nonzero(tg < 0.0)[0]
        if idx.size == 0:
            continue
        order = np.ascontiguousarray(idx[np.argsort(tg[idx] * direction)], dtype=np.intp)
        s = 0.0
        for j in range(3):
            y[j] = y0[j]
        for i in order:
            span = tg[i] - s
            nsub = <Py_ssize_t>ceil(fabs(span) / max_step)
            if nsub < 1:
                nsub = 1
            dt = span / nsub
            for step in range(nsub):
                _rhs(kind, p0, p1, y, k1)
                for j in range(3):
                    yt[j] = y[j] + 0.5 * dt * k1[j]
                _rhs(kind, p0, p1, yt, k2)
                for j in range(3):
                    yt[j] = y[j] + 0.5 * dt * k2[j]
                _rhs(kind, p0, p1, yt, k3)
                for j in range(3):
                    yt[j] = y[j] + dt * k3[j]
                _rhs(kind, p0, p1, yt, k4)
                for j in range(3):
                    y[j] = y[j] + dt * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]) / 6.0
            s = tg[i]
            for j in range(3):
                out[i, j] = y[j]
    return out


def rk4_march_generic(kd, y0, targets, max_step):
    from ._kernels_py import rk4_march_generic as _generic
    return _generic(kd, y0, targets, max_step)


cdef inline double _cat(double t, double sb, double cb, double s2) nogil:
    cdef double a = t - 0.7853981633974483
    cdef double sa = sin(a), ca = cos(a)
    cdef double lo = s2 + 2.0 * cb * sa * sa
    cdef double hi = s2 + 2.0 * cb * ca * ca
    return 1.4142135623730951 * sb / (lo * sqrt(hi))


cdef void _gk15(double a, double b, double sb, double cb, double s2,
               double* val, double* err) nogil:
    cdef double c = 0.5 * (a + b), hw = 0.5 * (b - a)
    cdef double fc = _cat(c, sb, cb, s2)
    cdef double resk = fc * WGK[7], resg = fc * WG[3], dx, fs
    cdef int j
    for j in range(7):
        dx = hw * XGK[j]
        fs = _cat(c - dx, sb, cb, s2) + _cat(c + dx, sb, cb, s2)
        resk += WGK[j] * fs
        if j % 2 == 1:
            resg += WG[j // 2] * fs
    val[0] = resk * hw
    err[0] = fabs((resk - resg) * hw)


def catenary_lambda(double beta, double a, double b, double rtol, double atol,
                    Py_ssize_t max_intervals=5000):
    from ._kernels_py import catenary_breakpoints
    cdef double sign = 1.0, tmp
    if a == b:
        return 0.0, 0.0, True
    if b < a:
        tmp = a
        a = b
        b = tmp
        sign = -1.0
    cdef double sb = sin(beta), cb = cos(beta)
    cdef double s2 = 2.0 * sin(0.5 * beta) * sin(0.5 * beta)
    cdef double total = 0.0, err = 0.0, lo, hi, val, e, mid, v1, e1, v2, e2, ne
    cdef Py_ssize_t k
    pts = catenary_breakpoints(a, b)
    heap = []
    for k in range(len(pts) - 1):
        lo = pts[k]
        hi = pts[k + 1]
        _gk15(lo, hi, sb, cb, s2, &val, &e)
        heapq.heappush(heap, (-e, lo, hi, val))
        total += val
        err += e
    while err > max(atol, rtol * fabs(total)):
        if len(heap) >= max_intervals:
            return sign * total, err, False
        ne, lo, hi, val = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not (lo < mid < hi):
            return sign * total, err, False
        _gk15(lo, mid, sb, cb, s2, &v1, &e1)
        _gk15(mid, hi, sb, cb, s2, &v2, &e2)
        heapq.heappush(heap, (-e1, lo, mid, v1))
        heapq.heappush(heap, (-e2, mid, hi, v2))
        total += v1 + v2 - val
        err += e1 + e2 + ne
    total = math.fsum([item[3] for item in heap])
    return sign * total, err, True


def helicoid_immersion(double h, x, y, z, t):
    cdef cnp.ndarray[double, ndim=1] xx = np.ascontiguousarray(x, dtype=float).ravel()
    cdef cnp.ndarray[double, ndim=1] yy = np.ascontiguousarray(y, dtype=float).ravel()
    cdef cnp.ndarray[double, ndim=1] zz = np.ascontiguousarray(z, dtype=float).ravel()
    cdef cnp.ndarray[double, ndim=1] tt = np.ascontiguousarray(t, dtype=float).ravel()
    cdef Py_ssize_t n = xx.shape[0], m = tt.shape[0], i, j
    cdef cnp.ndarray[double, ndim=3] out = np.empty((n, m, 4))
    cdef double ch, sh, ct, st
    for j in range(m):
        ch = cos(h * tt[j])
        sh = sin(h * tt[j])
        ct = cos(tt[j])
        st = sin(tt[j])
        for i in range(n):
            out[i, j, 0] = xx[i] * ch - yy[i] * sh
            out[i, j, 1] = xx[i] * sh + yy[i] * ch
            out[i, j, 2] = zz[i] * ct
            out[i, j, 3] = zz[i] * st
    return out


def helicoid_forms(double h, z, K, dK):
    cdef cnp.ndarray[double, ndim=1] zz = np.ascontiguousarray(z, dtype=float).ravel()
    cdef cnp.ndarray[double, ndim=1] kk = np.ascontiguousarray(K, dtype=float).ravel()
    cdef cnp.ndarray[double, ndim=1] dd = np.ascontiguousarray(dK, dtype=float).ravel()
    cdef Py_ssize_t n = zz.shape[0], i
    cdef cnp.ndarray[double, ndim=2] out = np.empty((10, n))
    cdef double h2 = h * h, z2, one_k2, a2, alpha
    for i in range(n):
        z2 = zz[i] * zz[i]
        one_k2 = 1.0 - kk[i] * kk[i]
        a2 = h2 * one_k2 + (1.0 - h2) * z2
        alpha = sqrt(a2)
        out[0, i] = 1.0
        out[1, i] = -h * kk[i]
        out[2, i] = h2 + (1.0 - h2) * z2
        out[3, i] = zz[i] * dd[i] / alpha
        out[4, i] = h * one_k2 / alpha
        out[5, i] = (1.0 - h2) * z2 * kk[i] / alpha
        out[6, i] = alpha
        out[7, i] = 0.5 * ((h2 + (1.0 - h2) * z2) * zz[i] * dd[i]
                           + (2.0 * h2 * one_k2 + (1.0 - h2) * z2) * kk[i]) / (a2 * alpha)
        out[8, i] = ((1.0 - h2) * z2 * zz[i] * kk[i] * dd[i] - h2 * one_k2 * one_k2) / (a2 * a2)
        out[9, i] = 1.0 + out[8, i]
    return out
