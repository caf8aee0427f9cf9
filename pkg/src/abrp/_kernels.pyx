# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops: partition branch-and-bound, Held-Karp, 2-opt.

Signatures and results match :mod:`abrp._pykernels` exactly.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()

IMPLEMENTATION = "compiled"

cdef double TIE_TOL = 1e-12


cdef class _PartitionSearch:
    cdef int N, C
    cdef const double[:, ::1] lb
    cdef double[::1] root
    cdef long long budget, nodes
    cdef bint exhausted
    cdef double best_cost
    cdef int best_len
    cdef int[::1] best
    cdef int[::1] stack

    def __init__(self, int N, int C, const double[:, ::1] lb, double incumbent_cost,
                 incumbent, long long budget):
        cdef int p
        self.N = N
        self.C = C
        self.lb = lb
        self.root = np.sqrt(np.arange(N + 1, dtype=np.float64))
        self.budget = budget
        self.nodes = 0
        self.exhausted = False
        self.best_cost = incumbent_cost
        self.best = np.zeros(N + 1, dtype=np.intc)
        self.stack = np.zeros(N + 1, dtype=np.intc)
        self.best_len = len(incumbent)
        for p in range(self.best_len):
            self.best[p] = incumbent[p]

    cdef bint _prefer(self, double cost, int depth):
        cdef int i
        if cost < self.best_cost - TIE_TOL:
            return True
        if cost > self.best_cost + TIE_TOL:
            return False
        if depth != self.best_len:
            return depth < self.best_len
        for i in range(depth):
            if self.stack[i] != self.best[i]:
                return self.stack[i] > self.best[i]
        return False

    cdef void _dfs(self, int rem, int cap, int depth, double cost, double s):
        cdef int p, i, top, nxt
        cdef double s2, c2
        if self.exhausted:
            return
        top = cap if cap < rem else rem
        for p in range(top, 0, -1):
            self.nodes += 1
            if self.nodes > self.budget:
                self.exhausted = True
                return
            s2 = s + self.root[p]
            c2 = cost + p * s2
            self.stack[depth] = p
            if p == rem:
                if self._prefer(c2, depth + 1):
                    self.best_cost = c2
                    self.best_len = depth + 1
                    for i in range(depth + 1):
                        self.best[i] = self.stack[i]
                continue
            nxt = p if p < self.C else self.C
            if c2 + (rem - p) * s2 + self.lb[rem - p, nxt] > self.best_cost + TIE_TOL:
                continue
            self._dfs(rem - p, nxt, depth + 1, c2, s2)
            if self.exhausted:
                return

    def run(self):
        self._dfs(self.N, self.C, 0, 0.0, 0.0)
        seq = [int(self.best[i]) for i in range(self.best_len)]
        return self.best_cost, seq, int(self.nodes), not self.exhausted


def partition_search(int N, int C, lb, double incumbent_cost, incumbent, long long budget):
    """Depth-first search over non-increasing partitions of ``N`` with parts
    ``<= C`` minimizing the cumulative cost.

    ``lb[r, m]`` lower-bounds the cost of serving ``r`` more individuals in
    parts of at most ``m`` with no prefix delay.  Returns
    ``(cost, parts, nodes, complete)``.
    """
    cdef const double[:, ::1] lbv = np.ascontiguousarray(lb, dtype=np.float64)
    search = _PartitionSearch(N, C, lbv, incumbent_cost, list(incumbent), budget)
    return search.run()


def held_karp(dist):
    """Shortest depot-anchored paths over every subset of the customers.

    ``dist`` is ``(m+1, m+1)`` with the depot at index 0.  Returns
    ``(paths, tours)`` where ``paths[mask, j]`` is the shortest path from the
    depot visiting exactly the customers in ``mask`` and ending at customer
    ``j + 1`` and ``tours[mask]`` closes the cheapest such path at the depot.
    """
    cdef double[:, ::1] d = np.ascontiguousarray(dist, dtype=np.float64)
    cdef int m = d.shape[0] - 1
    cdef Py_ssize_t full = 1 << m
    cdef Py_ssize_t mask, prev
    cdef int j, i
    cdef double best, cand, inf = float("inf")
    paths_arr = np.full((full, max(m, 1)), np.inf)
    tours_arr = np.zeros(full)
    cdef double[:, ::1] g = paths_arr
    cdef double[::1] tours = tours_arr
    for j in range(m):
        g[1 << j, j] = d[0, j + 1]
    for mask in range(1, full):
        for j in range(m):
            if not (mask >> j) & 1:
                continue
            prev = mask ^ (1 << j)
            if prev == 0:
                continue
            best = inf
            for i in range(m):
                if (prev >> i) & 1:
                    cand = g[prev, i] + d[i + 1, j + 1]
                    if cand < best:
                        best = cand
            g[mask, j] = best
        best = inf
        for j in range(m):
            if (mask >> j) & 1:
                cand = g[mask, j] + d[j + 1, 0]
                if cand < best:
                    best = cand
        tours[mask] = best
    return paths_arr, tours_arr


def two_opt(tour, dist):
    """First-improvement 2-opt on a closed tour until no move improves.

    ``tour`` is a permutation of node indices; the closing edge is implicit.
    Returns ``(tour, moves)``.
    """
    cdef double[:, ::1] d = np.ascontiguousarray(dist, dtype=np.float64)
    t_arr = np.array(tour, dtype=np.intp)
    cdef Py_ssize_t[::1] t = t_arr
    cdef Py_ssize_t n = t.shape[0]
    cdef Py_ssize_t i, j, lo, hi, a, b, c, e, tmp
    cdef long long moves = 0
    cdef bint improved = True
    cdef double delta
    if n < 4:
        return t_arr, 0
    while improved:
        improved = False
        for i in range(n - 1):
            a = t[i]
            b = t[i + 1]
            for j in range(i + 2, n):
                if i == 0 and j == n - 1:
                    continue
                c = t[j]
                e = t[(j + 1) % n]
                delta = d[a, c] + d[b, e] - d[a, b] - d[c, e]
                if delta < -1e-12:
                    lo = i + 1
                    hi = j
                    while lo < hi:
                        tmp = t[lo]
                        t[lo] = t[hi]
                        t[hi] = tmp
                        lo += 1
                        hi -= 1
                    moves += 1
                    improved = True
                    b = t[i + 1]
    return t_arr, int(moves)


def or_opt(tour, dist):
    """First-improvement Or-opt: move a segment of 1-3 nodes, optionally
    reversed, to another edge of the closed tour.  ``tour[0]`` stays fixed.

    Returns ``(tour, moves)``.
    """
    cdef double[:, ::1] d = np.ascontiguousarray(dist, dtype=np.float64)
    t_arr = np.array(tour, dtype=np.intp)
    cdef Py_ssize_t[::1] t = t_arr
    cdef Py_ssize_t n = t.shape[0]
    cdef Py_ssize_t i, L, j, p, s0, sl, nx, u, v, pos, k, moves = 0
    cdef double gain, fwd, rev
    cdef bint improved = True, found
    cdef int rev_flag
    if n < 5:
        return t_arr, 0
    buf_arr = np.empty(n, dtype=np.intp)
    cdef Py_ssize_t[::1] buf = buf_arr
    while improved:
        improved = False
        for i in range(1, n):
            found = False
            for L in range(1, 4):
                if i + L - 1 > n - 1:
                    break
                p = t[i - 1]
                s0 = t[i]
                sl = t[i + L - 1]
                nx = t[(i + L) % n]
                gain = d[p, nx] - d[p, s0] - d[sl, nx]
                for j in range(n):
                    if i - 1 <= j <= i + L - 1:
                        continue
                    u = t[j]
                    v = t[(j + 1) % n]
                    fwd = gain - d[u, v] + d[u, s0] + d[sl, v]
                    rev = gain - d[u, v] + d[u, sl] + d[s0, v]
                    if fwd < -1e-12:
                        rev_flag = 0
                    elif rev < -1e-12:
                        rev_flag = 1
                    else:
                        continue
                    # rebuild: rest with the segment inserted after t[j]
                    pos = 0
                    for k in range(n):
                        if i <= k < i + L:
                            continue
                        buf[pos] = t[k]
                        pos += 1
                        if k == j:
                            if rev_flag:
                                for u in range(L):
                                    buf[pos] = t[i + L - 1 - u]
                                    pos += 1
                            else:
                                for u in range(L):
                                    buf[pos] = t[i + u]
                                    pos += 1
                    for k in range(n):
                        t[k] = buf[k]
                    moves += 1
                    improved = True
                    found = True
                    break
                if found:
                    break
    return t_arr, int(moves)
