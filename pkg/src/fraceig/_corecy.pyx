# cython: boundscheck=False, wraparound=False, cdivision=True
"""Cython implementation of the hot pair-sum kernels.

Same contract as _corenp; row-major summation order, so serial runs are
bit-reproducible.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, pow, sqrt

cnp.import_array()

BACKEND_NAME = "cython"


def pairsum_energy(const double[::1] u, const double[:, ::1] W, double p):
    cdef Py_ssize_t i, j, n = u.shape[0]
    cdef double total = 0.0, row, d
    cdef bint quad = (p == 2.0)
    for i in range(n):
        row = 0.0
        for j in range(n):
            d = fabs(u[i] - u[j])
            if quad:
                row += d * d * W[i, j]
            else:
                row += pow(d, p) * W[i, j]
        total += row
    return total


def pairsum_gradient(const double[::1] u, const double[:, ::1] W, double p):
    cdef Py_ssize_t i, j, n = u.shape[0]
    cdef double d, row
    cdef bint quad = (p == 2.0)
    out_arr = np.empty(n)
    cdef double[::1] out = out_arr
    for i in range(n):
        row = 0.0
        for j in range(n):
            d = u[i] - u[j]
            if quad:
                row += d * W[i, j]
            else:
                row += pow(fabs(d), p - 2.0) * d * W[i, j]
        out[i] = row
    return out_arr


def holder_sup(const double[::1] values, const double[:, ::1] coords, double alpha):
    cdef Py_ssize_t i, j, ax, n = values.shape[0], dim = coords.shape[1]
    cdef double best = 0.0, dv, d2, diff, q
    cdef double half_alpha = alpha / 2.0
    for i in range(n):
        for j in range(i + 1, n):
            dv = fabs(values[i] - values[j])
            if dv == 0.0:
                continue
            d2 = 0.0
            for ax in range(dim):
                diff = coords[i, ax] - coords[j, ax]
                d2 += diff * diff
            q = dv / pow(d2, half_alpha)
            if q > best:
                best = q
    return best
