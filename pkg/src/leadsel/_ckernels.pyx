# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled hot kernels.  Semantics are identical to ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport INFINITY, fabs

cnp.import_array()

DEF MEDIAN = 0
DEF CENTER_WEIGHTED = 2
DEF CENTER_WEIGHTED_CORRECTED = 3


def prufer_decode(const cnp.int64_t[:] seq, Py_ssize_t n):
    cdef cnp.int64_t[:] degree = np.ones(n, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=2] edges = np.empty((n - 1, 2), dtype=np.int64)
    cdef Py_ssize_t i, k = 0, ptr = 0, leaf
    cdef cnp.int64_t x
    for i in range(seq.shape[0]):
        degree[seq[i]] += 1
    while degree[ptr] != 1:
        ptr += 1
    leaf = ptr
    for i in range(seq.shape[0]):
        x = seq[i]
        edges[k, 0] = leaf
        edges[k, 1] = x
        k += 1
        degree[x] -= 1
        if x < ptr and degree[x] == 1:
            leaf = x
        else:
            ptr += 1
            while degree[ptr] != 1:
                ptr += 1
            leaf = ptr
    edges[k, 0] = leaf
    edges[k, 1] = n - 1
    return edges


cdef inline double _node_update(Py_ssize_t lo, Py_ssize_t hi, const cnp.int64_t[:] indices,
                                const double[:] cost, const double[:] values, int mode) nogil:
    cdef Py_ssize_t p
    cdef double x, top = -INFINITY, second = -INFINITY, total = 0.0
    if hi - lo == 1:
        return 1.0 if mode == MEDIAN else 0.0
    for p in range(lo, hi):
        x = values[indices[p]]
        if mode >= CENTER_WEIGHTED:
            x = x + cost[p]
        total += x
        if x > top:
            second = top
            top = x
        elif x > second:
            second = x
    if mode == MEDIAN:
        return 1.0 + (total - top)
    if mode == CENTER_WEIGHTED_CORRECTED:
        return second
    return 1.0 + second


cdef void _round(const cnp.int64_t[:] indptr, const cnp.int64_t[:] indices, const double[:] cost,
                 const double[:] values, int mode, double[:] out) nogil:
    cdef Py_ssize_t i, n = indptr.shape[0] - 1
    for i in range(n):
        if indptr[i + 1] == indptr[i]:
            out[i] = values[i]
        else:
            out[i] = _node_update(indptr[i], indptr[i + 1], indices, cost, values, mode)


cdef Py_ssize_t _transfer(const cnp.int64_t[:] indptr, const cnp.int64_t[:] indices,
                          const double[:] prev, const double[:] new, Py_ssize_t leader) nogil:
    cdef Py_ssize_t p, j, best = -1
    cdef double v, best_val = -INFINITY
    for p in range(indptr[leader], indptr[leader + 1]):
        j = indices[p]
        v = prev[j]
        if v >= best_val:
            best_val = v
            best = j
    if best >= 0 and best_val > new[leader]:
        return best
    return leader


def protocol_round(const cnp.int64_t[:] indptr, const cnp.int64_t[:] indices, const double[:] cost,
                   const double[:] values, int mode, double[:] out):
    _round(indptr, indices, cost, values, mode, out)


def transfer(const cnp.int64_t[:] indptr, const cnp.int64_t[:] indices,
             const double[:] prev, const double[:] new, Py_ssize_t leader):
    return int(_transfer(indptr, indices, prev, new, leader))


def run_rounds(const cnp.int64_t[:] indptr, const cnp.int64_t[:] indices, const double[:] cost,
               values, Py_ssize_t leader, int mode, Py_ssize_t rounds, double tol):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef cnp.ndarray[double, ndim=1] a = np.array(values, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] b = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] leaders = np.empty(rounds + 1, dtype=np.int64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] changed = np.zeros(rounds, dtype=np.uint8)
    cdef double[:] cur = a
    cdef double[:] nxt = b
    cdef double[:] tmp
    cdef Py_ssize_t t, i
    leaders[0] = leader
    with nogil:
        for t in range(rounds):
            _round(indptr, indices, cost, cur, mode, nxt)
            leader = _transfer(indptr, indices, cur, nxt, leader)
            leaders[t + 1] = leader
            for i in range(n):
                if fabs(nxt[i] - cur[i]) > tol:
                    changed[t] = 1
                    break
            tmp = cur
            cur = nxt
            nxt = tmp
    return np.asarray(cur), leaders, changed


def tree_distances(const cnp.int64_t[:] indptr, const cnp.int64_t[:] indices, const double[:] lengths):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef cnp.ndarray[double, ndim=2] out = np.zeros((n, n), dtype=np.float64)
    cdef cnp.int64_t[:] stack = np.empty(max(n, 1), dtype=np.int64)
    cdef cnp.int64_t[:] parent = np.empty(max(n, 1), dtype=np.int64)
    cdef Py_ssize_t s, top, u, v, p
    cdef double du
    for s in range(n):
        parent[s] = -1
        top = 0
        stack[top] = s
        top += 1
        while top > 0:
            top -= 1
            u = stack[top]
            du = out[s, u]
            for p in range(indptr[u], indptr[u + 1]):
                v = indices[p]
                if v != parent[u]:
                    parent[v] = u
                    out[s, v] = du + lengths[p]
                    stack[top] = v
                    top += 1
    return out
