# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for term-list polynomial evaluation.

Mirrors `isolab._kernels_py`; selected at import by `isolab.backend` when
this module has been built (`python setup.py build_ext --inplace`).
"""

import numpy as np


def eval_terms(const double[::1] coeffs, const long long[:, ::1] exps, const double[:, ::1] points):
    cdef Py_ssize_t n = points.shape[0]
    cdef Py_ssize_t t = coeffs.shape[0]
    cdef Py_ssize_t d = points.shape[1]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t i, j, k
    cdef double acc, m, x
    cdef long long e
    for i in range(n):
        acc = 0.0
        for j in range(t):
            m = coeffs[j]
            for k in range(d):
                e = exps[j, k]
                if e != 0:
                    x = points[i, k]
                    while e > 0:
                        m *= x
                        e -= 1
            acc += m
        o[i] = acc
    return out


def eval_bank(const double[::1] coeffs, const long long[:, ::1] exps, const long long[::1] offsets,
              const double[:, ::1] points):
    cdef Py_ssize_t n = points.shape[0]
    cdef Py_ssize_t p = offsets.shape[0] - 1
    cdef Py_ssize_t d = points.shape[1]
    out = np.empty((n, p), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef Py_ssize_t i, q, j, k
    cdef double acc, m, x
    cdef long long e
    for i in range(n):
        for q in range(p):
            acc = 0.0
            for j in range(offsets[q], offsets[q + 1]):
                m = coeffs[j]
                for k in range(d):
                    e = exps[j, k]
                    if e != 0:
                        x = points[i, k]
                        while e > 0:
                            m *= x
                            e -= 1
                acc += m
            o[i, q] = acc
    return out
