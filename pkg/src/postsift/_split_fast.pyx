# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled best-split kernel; see postsift._split for the contract.

Candidates are ranked by an exact-integer decision quantity so that
mathematically tied gains compare equal and the smallest threshold wins.
The expression order matches the numpy fallback exactly and the module
is compiled with -ffp-contract=off, so both backends return identical
bits.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def best_split_sorted(cnp.float64_t[::1] values, cnp.int64_t[::1] labels):
    """Best Gini boundary over a sorted column; (-1, 0.0) if constant."""
    cdef Py_ssize_t n = values.shape[0]
    cdef Py_ssize_t i
    cdef double total_pos = 0.0
    cdef double n_f = <double> n
    cdef double pl = 0.0
    cdef double nl, nr, pr, ql, qr, A, B, T, parent
    cdef double best_T = 0.0
    cdef Py_ssize_t best_idx = -1

    for i in range(n):
        total_pos += <double> labels[i]
    parent = 1.0 - (total_pos / n_f) * (total_pos / n_f) \
        - ((n_f - total_pos) / n_f) * ((n_f - total_pos) / n_f)

    for i in range(n - 1):
        pl += <double> labels[i]
        if values[i] == values[i + 1]:
            continue
        nl = <double> (i + 1)
        nr = n_f - nl
        pr = total_pos - pl
        ql = nl - pl
        qr = nr - pr
        A = pl * pl + ql * ql
        B = pr * pr + qr * qr
        T = (A * nr + B * nl) / (nl * nr)
        if best_idx < 0 or T > best_T:
            best_T = T
            best_idx = i

    if best_idx < 0:
        return -1, 0.0
    return best_idx, parent - 1.0 + best_T / n_f
