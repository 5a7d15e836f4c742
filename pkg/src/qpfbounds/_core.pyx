# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels. Same API and semantics as ``_fallback``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sin, fabs, rint, M_PI
from libc.stdint cimport int64_t

cnp.import_array()

cdef double SINGULAR_TOL = 1e-12


cdef inline double _sinc_ratio(double u, long L) noexcept nogil:
    # one shared reduction keeps numerator and denominator consistent near u = kL
    cdef double w = u - L * rint(u / L)
    cdef double dv = w / L
    cdef double s, d
    if fabs(dv) < SINGULAR_TOL:
        return <double>L * L
    s = sin(M_PI * (w - rint(w)))
    d = sin(M_PI * dv)
    return (s * s) / (d * d)


def sinc_ratio_array(u, long L):
    cdef cnp.ndarray[double, ndim=1] uu = np.ascontiguousarray(u, dtype=np.float64).reshape(-1)
    cdef Py_ssize_t i, n = uu.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = _sinc_ratio(uu[i], L)
    return out.reshape(np.shape(u))


def h_sum(x, long M, long L, double eps):
    cdef cnp.ndarray[double, ndim=1] xx = np.ascontiguousarray(x, dtype=np.float64).reshape(-1)
    cdef Py_ssize_t i, n = xx.shape[0]
    cdef long z
    cdef double scale = 1.0 + eps
    cdef double acc, xi
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            xi = xx[i]
            acc = 0.0
            for z in range(M):
                acc += _sinc_ratio((z + xi) * scale, L)
                acc += _sinc_ratio((z + 1.0 - xi) * scale, L)
            o[i] = acc
    return out.reshape(np.shape(x))


def measure_prob_array(ell, int n, long r, long L):
    cdef cnp.ndarray[int64_t, ndim=1] ee = np.ascontiguousarray(ell, dtype=np.int64).reshape(-1)
    cdef Py_ssize_t i, cnt = ee.shape[0]
    cdef int64_t N = (<int64_t>1) << n
    cdef int64_t mask = N - 1
    cdef int64_t half = N >> 1
    cdef int64_t a, b
    cdef double fN = <double>N
    cdef double norm = fN * L
    cdef double s, d
    out = np.empty(cnt, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for i in range(cnt):
            a = (ee[i] * r) & mask
            if a == 0:
                o[i] = (<double>L * L) / norm
                continue
            b = (a * L) & mask
            if a > half:
                a -= N
            if b > half:
                b -= N
            s = sin(M_PI * (b / fN))
            d = sin(M_PI * (a / fN))
            o[i] = (s * s) / (d * d) / norm
    return out.reshape(np.shape(ell))


cdef inline int64_t _cf_one(int64_t ell, int n, int m, int64_t r) noexcept nogil:
    cdef int64_t two_n = (<int64_t>1) << n
    cdef int64_t two_m = (<int64_t>1) << m
    cdef int shift = n - 2 * m - 1
    cdef int64_t h_prev = 0, h = 1, k_prev = 1, k = 0, t
    cdef int64_t a_num = ell, a_den = two_n, a, rem, dev
    cdef bint close
    while a_den != 0:
        a = a_num // a_den
        rem = a_num - a * a_den
        t = a * h + h_prev
        h_prev = h
        h = t
        t = a * k + k_prev
        k_prev = k
        k = t
        if k >= two_m:
            return 0
        dev = h * two_n - ell * k
        if dev < 0:
            dev = -dev
        if shift >= 0:
            close = dev <= (k << shift)
        else:
            close = (dev << -shift) <= k
        if close:
            if k > 1 and r % k == 0:
                return k
            return 0
        a_num = a_den
        a_den = rem
    return 0


def cf_batch(ell, int n, int m, long r):
    if n + m > 62:
        raise OverflowError("continued-fraction kernel needs n + m <= 62")
    cdef cnp.ndarray[int64_t, ndim=1] ee = np.ascontiguousarray(ell, dtype=np.int64).reshape(-1)
    cdef Py_ssize_t i, cnt = ee.shape[0]
    out = np.empty(cnt, dtype=np.int64)
    cdef int64_t[::1] o = out
    with nogil:
        for i in range(cnt):
            o[i] = _cf_one(ee[i], n, m, r)
    return out.reshape(np.shape(ell))


def window_batch(ell, int n, long r, long M):
    if n + (<object>r).bit_length() > 60:
        raise OverflowError("window kernel needs n + bitlen(r) <= 60")
    cdef cnp.ndarray[int64_t, ndim=1] ee = np.ascontiguousarray(ell, dtype=np.int64).reshape(-1)
    cdef Py_ssize_t i, cnt = ee.shape[0]
    cdef int64_t N = (<int64_t>1) << n
    cdef int64_t k, kk, d, e
    cdef int dk
    out = np.zeros(cnt, dtype=np.bool_)
    cdef cnp.npy_bool[::1] o = out
    with nogil:
        for i in range(cnt):
            e = ee[i]
            k = (2 * e * r + N) // (2 * N)
            for dk in range(-1, 2):
                kk = k + dk
                if kk < 1 or kk > r - 1:
                    continue
                d = e * r - kk * N
                if d < 0:
                    d = -d
                if d <= M * r:
                    o[i] = 1
                    break
    return out.reshape(np.shape(ell))
