# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops. Must agree with ``_kernels_py`` to rounding."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, pow, floor, ceil

cnp.import_array()


def interval_sums(const double[:, ::1] a, double lo, double delta,
                  const double[::1] left, const double[::1] right):
    """``out[k, :] = sum_i |[left_k, right_k] & cell_i| * a[i, :]``."""
    cdef Py_ssize_t n = a.shape[0], M = a.shape[1], K = left.shape[0]
    cdef Py_ssize_t k, i, i0, i1, col
    cdef double c0, c1, w, lk, rk
    out = np.zeros((K, M))
    cdef double[:, ::1] o = out
    with nogil:
        for k in range(K):
            lk = left[k]
            rk = right[k]
            i0 = <Py_ssize_t>floor((lk - lo) / delta)
            i1 = <Py_ssize_t>ceil((rk - lo) / delta) - 1
            if i0 < 0:
                i0 = 0
            if i1 > n - 1:
                i1 = n - 1
            for i in range(i0, i1 + 1):
                c0 = lo + i * delta
                c1 = lo + (i + 1) * delta
                w = (c1 if c1 < rk else rk) - (c0 if c0 > lk else lk)
                if w <= 0:
                    continue
                for col in range(M):
                    o[k, col] += w * a[i, col]
    return out


def ball_accumulate(const double[::1] f, const cnp.intp_t[::1] pos,
                    const cnp.intp_t[::1] offsets, const double[::1] coeffs,
                    double v, bint use_max):
    """Sum (or max) over shifts of ``|sum_l coeffs[l] f[pos + l*offset]|**v``."""
    cdef Py_ssize_t M = pos.shape[0], H = offsets.shape[0], L = coeffs.shape[0]
    cdef Py_ssize_t i, h, l, base, off
    cdef double acc, val
    out = np.zeros(M)
    cdef double[::1] o = out
    with nogil:
        for i in range(M):
            base = pos[i]
            acc = 0.0
            for h in range(H):
                off = offsets[h]
                val = 0.0
                for l in range(L):
                    val = val + coeffs[l] * f[base + l * off]
                val = fabs(val)
                if use_max:
                    if val > acc:
                        acc = val
                elif v == 1.0:
                    acc = acc + val
                else:
                    acc = acc + pow(val, v)
            o[i] = acc
    return out
