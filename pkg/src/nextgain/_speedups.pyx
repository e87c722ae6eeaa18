# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the hot Monte Carlo and quadrature loops.

Each function has a pure-NumPy twin in nextgain.kernels._fallback with
identical semantics; nextgain.kernels selects one backend at import time.
The special-function helpers are self-contained C implementations of the
same series/continued-fraction algorithms as nextgain.special, so the two
backends agree to a few ulp.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, fabs, lgamma, log, log1p, pow, sqrt

cnp.import_array()

cdef double _TINY = 1e-300
cdef double _CONV_EPS = 1e-16
cdef int _MAX_ITER = 500
cdef double _SQRT2 = 1.4142135623730951
cdef double _INV_SQRT_2PI = 0.3989422804014327


cdef double _lower_gamma_series(double s, double x) noexcept nogil:
    cdef double ap = s
    cdef double term = 1.0 / s
    cdef double total = term
    cdef int i
    for i in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if fabs(term) < fabs(total) * _CONV_EPS:
            break
    return total * exp(-x + s * log(x) - lgamma(s))


cdef double _upper_gamma_cf(double s, double x) noexcept nogil:
    cdef double b = x + 1.0 - s
    cdef double c = 1.0 / _TINY
    cdef double d = 1.0 / b
    cdef double h = d
    cdef double an, delta, prefactor
    cdef int i
    for i in range(1, _MAX_ITER + 1):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if fabs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if fabs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if fabs(delta - 1.0) < _CONV_EPS:
            break
    prefactor = -x + s * log(x) - lgamma(s)
    if prefactor <= -745.0:
        return 0.0
    return exp(prefactor) * h


cdef double _q_gamma(double s, double x) noexcept nogil:
    # Q(s, x) for s > 0, x >= 0.
    if x == 0.0:
        return 1.0
    if x < s + 1.0:
        return 1.0 - _lower_gamma_series(s, x)
    return _upper_gamma_cf(s, x)


cdef double _erfc(double x) noexcept nogil:
    if x < 0.0:
        return 2.0 - _erfc(-x)
    if x == 0.0:
        return 1.0
    return _q_gamma(0.5, x * x)


cdef double _norm_cdf(double z) noexcept nogil:
    return 0.5 * _erfc(-z / _SQRT2)


cdef double _betainc_cf(double a, double b, double x) noexcept nogil:
    cdef double qab = a + b
    cdef double qap = a + 1.0
    cdef double qam = a - 1.0
    cdef double c = 1.0
    cdef double d = 1.0 - qab * x / qap
    cdef double h, aa, delta
    cdef int m, m2
    if fabs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if fabs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if fabs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if fabs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if fabs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if fabs(delta - 1.0) < _CONV_EPS:
            break
    return h


cdef double _betainc(double a, double b, double x) noexcept nogil:
    cdef double log_front, front
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    log_front = lgamma(a + b) - lgamma(a) - lgamma(b) + a * log(x) + b * log1p(-x)
    front = exp(log_front) if log_front > -745.0 else 0.0
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betainc_cf(a, b, x) / a
    return 1.0 - front * _betainc_cf(b, a, 1.0 - x) / b


def closed_form_gain(double[::1] values):
    """Expected-gain sum over an ascending sample in [0,1]."""
    cdef Py_ssize_t n = values.shape[0]
    cdef double total = 0.0
    cdef double nf = <double> n
    cdef double r
    cdef Py_ssize_t j
    if n <= 1:
        return 0.0
    with nogil:
        for j in range(1, n):
            r = j / nf
            total += pow(r, nf) * (1.0 - r) * (values[j] - values[j - 1])
    return total


def step_gain_integral(double[::1] breaks, double[::1] levels, long k):
    """Exact integral of F^k (1-F) over [0,1] for a step CDF."""
    cdef Py_ssize_t m = breaks.shape[0]
    cdef double total = 0.0
    cdef double kf = <double> k
    cdef double width, lev
    cdef Py_ssize_t i
    with nogil:
        for i in range(m):
            width = (breaks[i + 1] if i + 1 < m else 1.0) - breaks[i]
            lev = levels[i]
            total += pow(lev, kf) * (1.0 - lev) * width
    return total


def band_integrals(double[::1] breaks, double[::1] levels, long k, double eps):
    """Exact step integrals of the clamped confidence-band integrands."""
    cdef Py_ssize_t m = breaks.shape[0]
    cdef double lb = 0.0
    cdef double ub = 0.0
    cdef double kf = <double> k
    cdef double width, lev, lo, hi, low_factor
    cdef Py_ssize_t i
    with nogil:
        if breaks[0] > 0.0:
            hi = eps if eps < 1.0 else 1.0
            ub += pow(hi, kf) * (1.0 + eps) * breaks[0]
        for i in range(m):
            width = (breaks[i + 1] if i + 1 < m else 1.0) - breaks[i]
            lev = levels[i]
            lo = lev - eps
            if lo < 0.0:
                lo = 0.0
            hi = lev + eps
            if hi > 1.0:
                hi = 1.0
            low_factor = 1.0 - eps - lev
            if low_factor < 0.0:
                low_factor = 0.0
            lb += pow(lo, kf) * low_factor * width
            ub += pow(hi, kf) * (1.0 + eps - lev) * width
    return lb, ub


def sup_abs_dev_uniform(double[::1] values):
    """sup_x |ECDF(x) - x| for an ascending sample, exact at every jump."""
    cdef Py_ssize_t n = values.shape[0]
    cdef double nf = <double> n
    cdef double best = 0.0
    cdef double dev
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            dev = (i + 1) / nf - values[i]
            if dev > best:
                best = dev
            dev = values[i] - i / nf
            if dev > best:
                best = dev
    return best


def normal_cdf_batch(double[::1] z):
    cdef Py_ssize_t n = z.shape[0]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            out[i] = _norm_cdf(z[i])
    return out_arr


def betainc_batch(double a, double b, double[::1] x):
    cdef Py_ssize_t n = x.shape[0]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            out[i] = _betainc(a, b, x[i])
    return out_arr
