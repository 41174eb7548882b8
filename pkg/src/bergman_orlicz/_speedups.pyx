# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: atom-sum evaluation, pairwise disk separation,
and point-in-disk cover counts. Mirrors _kernels_py exactly."""

import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()


def atom_sum_eval(cnp.ndarray[cnp.complex128_t, ndim=1] z,
                  cnp.ndarray[cnp.complex128_t, ndim=1] centers,
                  cnp.ndarray[cnp.complex128_t, ndim=1] coeffs,
                  double expo):
    """sum_k coeffs[k] * ((z - conj(centers[k])) / i)^(-expo), elementwise in z."""
    cdef Py_ssize_t n = z.shape[0]
    cdef Py_ssize_t m = centers.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.zeros(n, dtype=np.complex128)
    cdef Py_ssize_t i, k
    cdef double complex base, acc, mi = -1j
    for i in range(n):
        acc = 0
        for k in range(m):
            base = (z[i] - centers[k].conjugate()) * mi
            acc = acc + coeffs[k] * base ** (-expo)
        out[i] = acc
    return out


def min_separation(cnp.ndarray[cnp.float64_t, ndim=1] xs,
                   cnp.ndarray[cnp.float64_t, ndim=1] ys,
                   cnp.ndarray[cnp.float64_t, ndim=1] radii):
    """Minimum over pairs of (center distance - radius sum); > 0 iff disjoint."""
    cdef Py_ssize_t n = xs.shape[0]
    cdef double best = np.inf
    cdef double dx, dy, gap
    cdef Py_ssize_t i, j
    for i in range(n):
        for j in range(i + 1, n):
            dx = xs[i] - xs[j]
            dy = ys[i] - ys[j]
            gap = sqrt(dx * dx + dy * dy) - radii[i] - radii[j]
            if gap < best:
                best = gap
    return best


def cover_counts(cnp.ndarray[cnp.float64_t, ndim=1] px,
                 cnp.ndarray[cnp.float64_t, ndim=1] py,
                 cnp.ndarray[cnp.float64_t, ndim=1] cx,
                 cnp.ndarray[cnp.float64_t, ndim=1] cy,
                 cnp.ndarray[cnp.float64_t, ndim=1] radii):
    """For each point, the number of disks containing it (strict inequality)."""
    cdef Py_ssize_t n = px.shape[0]
    cdef Py_ssize_t m = cx.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out = np.zeros(n, dtype=np.int64)
    cdef double dx, dy
    cdef Py_ssize_t i, k
    cdef long c
    for i in range(n):
        c = 0
        for k in range(m):
            dx = px[i] - cx[k]
            dy = py[i] - cy[k]
            if dx * dx + dy * dy < radii[k] * radii[k]:
                c = c + 1
        out[i] = c
    return out
