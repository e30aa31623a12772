# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; contracts and semantics identical to _pykernels."""

import numpy as np


def assign_participants(quotas, u):
    """Quota-constrained uniform participant assignment (see _pykernels)."""
    cdef long long[::1] q = np.ascontiguousarray(quotas, dtype=np.int64)
    cdef double[::1] uu = np.ascontiguousarray(u, dtype=np.float64)
    cdef Py_ssize_t n = q.shape[0]
    cdef Py_ssize_t total = uu.shape[0]

    remaining_arr = np.array(q, dtype=np.int64)
    out_arr = np.empty(total, dtype=np.int64)
    active_arr = np.empty(n, dtype=np.int64)
    cdef long long[::1] remaining = remaining_arr
    cdef long long[::1] out = out_arr
    cdef long long[::1] active = active_arr

    cdef Py_ssize_t size = 0
    cdef Py_ssize_t i, t, j
    cdef long long pid
    for i in range(n):
        if q[i] > 0:
            active[size] = i
            size += 1

    for t in range(total):
        if size == 0:
            raise ValueError(
                "participant quotas exhausted before all reports assigned"
            )
        j = <Py_ssize_t> (uu[t] * size)
        if j >= size:  # guard against float rounding at u ~ 1
            j = size - 1
        pid = active[j]
        out[t] = pid
        remaining[pid] -= 1
        if remaining[pid] == 0:
            size -= 1
            active[j] = active[size]
    return out_arr
