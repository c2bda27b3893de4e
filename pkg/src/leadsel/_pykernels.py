"""Pure-Python implementations of the hot kernels.

Each function mirrors one in ``_ckernels.pyx`` exactly, including argument
order and return types, so the two are interchangeable.
"""

import math

import numpy as np

MEDIAN = 0
CENTER = 1
CENTER_WEIGHTED = 2
CENTER_WEIGHTED_CORRECTED = 3


def prufer_decode(seq, n):
    seq = [int(x) for x in seq]
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    edges = np.empty((n - 1, 2), dtype=np.int64)
    # linear-time decoding with a moving pointer
    ptr = 0
    while degree[ptr] != 1:
        ptr += 1
    leaf = ptr
    k = 0
    for x in seq:
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


def _node_update(lo, hi, indices, cost, values, mode):
    deg = hi - lo
    if deg == 1:
        return 1.0 if mode == MEDIAN else 0.0
    top = -math.inf
    second = -math.inf
    total = 0.0
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


def protocol_round(indptr, indices, cost, values, mode, out):
    n = len(indptr) - 1
    for i in range(n):
        lo = indptr[i]
        hi = indptr[i + 1]
        if hi == lo:
            out[i] = values[i]
        else:
            out[i] = _node_update(lo, hi, indices, cost, values, mode)


def transfer(indptr, indices, prev, new, leader):
    lo = indptr[leader]
    hi = indptr[leader + 1]
    own = new[leader]
    best = -1
    best_val = -math.inf
    for p in range(lo, hi):
        j = indices[p]
        v = prev[j]
        # neighbors are sorted by id, so >= keeps the largest id on ties
        if v >= best_val:
            best_val = v
            best = j
    if best >= 0 and best_val > own:
        return int(best)
    return int(leader)


def run_rounds(indptr, indices, cost, values, leader, mode, rounds, tol):
    n = len(indptr) - 1
    cur = np.array(values, dtype=np.float64)
    nxt = np.empty(n, dtype=np.float64)
    leaders = np.empty(rounds + 1, dtype=np.int64)
    changed = np.zeros(rounds, dtype=np.uint8)
    leaders[0] = leader
    for t in range(rounds):
        protocol_round(indptr, indices, cost, cur, mode, nxt)
        leader = transfer(indptr, indices, cur, nxt, leader)
        leaders[t + 1] = leader
        for i in range(n):
            if abs(nxt[i] - cur[i]) > tol:
                changed[t] = 1
                break
        cur, nxt = nxt, cur
    return cur, leaders, changed


def tree_distances(indptr, indices, lengths):
    n = len(indptr) - 1
    out = np.zeros((n, n), dtype=np.float64)
    stack = []
    parent = [0] * n
    for s in range(n):
        row = out[s]
        parent[s] = -1
        stack.append(s)
        while stack:
            u = stack.pop()
            du = row[u]
            for p in range(indptr[u], indptr[u + 1]):
                v = indices[p]
                if v != parent[u]:
                    parent[v] = u
                    row[v] = du + lengths[p]
                    stack.append(v)
    return out
