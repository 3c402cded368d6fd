# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled grid kernels: the hot inner loops behind every coefficient.

Mirrors ``_pykernels`` exactly; see that module for the contracts.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

NAME = "c"


def label_counts(const cnp.int32_t[:, :] codes, int n_labels):
    cdef Py_ssize_t n_units = codes.shape[0]
    cdef Py_ssize_t n_ann = codes.shape[1]
    cdef cnp.ndarray[cnp.int64_t, ndim=2] out = np.zeros(
        (n_units, n_labels), dtype=np.int64
    )
    cdef cnp.int64_t[:, :] o = out
    cdef Py_ssize_t u, a
    cdef int code
    for u in range(n_units):
        for a in range(n_ann):
            code = codes[u, a]
            if code >= 0:
                o[u, code] += 1
    return out


def pair_confusion(const cnp.int32_t[:] a, const cnp.int32_t[:] b, int n_labels):
    cdef Py_ssize_t n_units = a.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=2] out = np.zeros(
        (n_labels, n_labels), dtype=np.int64
    )
    cdef cnp.int64_t[:, :] o = out
    cdef Py_ssize_t u
    cdef int ca, cb
    for u in range(n_units):
        ca = a[u]
        cb = b[u]
        if ca >= 0 and cb >= 0:
            o[ca, cb] += 1
    return out


def coincidence_from_counts(const cnp.int64_t[:, :] counts):
    # each unit's integer pair count n_j*(n_k - [j==k]) is divided exactly
    # once by (m - 1), so unanimous units hit the diagonal with no rounding
    cdef Py_ssize_t n_units = counts.shape[0]
    cdef Py_ssize_t n_labels = counts.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] o_arr = np.zeros(
        (n_labels, n_labels), dtype=np.float64
    )
    cdef cnp.ndarray[cnp.int64_t, ndim=1] nc_arr = np.zeros(
        n_labels, dtype=np.int64
    )
    cdef cnp.float64_t[:, :] o = o_arr
    cdef cnp.int64_t[:] n_c = nc_arr
    cdef Py_ssize_t u, j, k
    cdef cnp.int64_t r, cj, pair_count
    cdef cnp.int64_t n = 0
    cdef double denom
    for u in range(n_units):
        r = 0
        for j in range(n_labels):
            r += counts[u, j]
        if r < 2:
            continue
        n += r
        denom = r - 1.0
        for j in range(n_labels):
            cj = counts[u, j]
            if cj == 0:
                continue
            n_c[j] += cj
            for k in range(n_labels):
                if j == k:
                    pair_count = cj * (cj - 1)
                else:
                    pair_count = cj * counts[u, k]
                if pair_count != 0:
                    o[j, k] += pair_count / denom
    return o_arr, nc_arr, int(n)
