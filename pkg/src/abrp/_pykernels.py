"""Pure-Python versions of the compiled kernels in ``_kernels.pyx``."""

import math
import sys

import numpy as np

IMPLEMENTATION = "python"

TIE_TOL = 1e-12


class _Exhausted(Exception):
    pass


def partition_search(N, C, lb, incumbent_cost, incumbent, budget):
    lb = np.asarray(lb, dtype=float).tolist()
    root = [math.sqrt(p) for p in range(N + 1)]
    best = [incumbent_cost, list(incumbent)]
    stack = []
    nodes = 0

    def prefer(cost):
        if cost < best[0] - TIE_TOL:
            return True
        if cost > best[0] + TIE_TOL:
            return False
        if len(stack) != len(best[1]):
            return len(stack) < len(best[1])
        return stack > best[1]

    def dfs(rem, cap, cost, s):
        nonlocal nodes
        for p in range(min(cap, rem), 0, -1):
            nodes += 1
            if nodes > budget:
                raise _Exhausted
            s2 = s + root[p]
            c2 = cost + p * s2
            stack.append(p)
            if p == rem:
                if prefer(c2):
                    best[0] = c2
                    best[1] = list(stack)
            else:
                nxt = min(p, C)
                if c2 + (rem - p) * s2 + lb[rem - p][nxt] <= best[0] + TIE_TOL:
                    dfs(rem - p, nxt, c2, s2)
            stack.pop()

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, N + 100))
    try:
        dfs(N, C, 0.0, 0.0)
        complete = True
    except _Exhausted:
        nodes = budget + 1
        complete = False
    finally:
        sys.setrecursionlimit(old_limit)
    return best[0], best[1], nodes, complete


def held_karp(dist):
    d = np.asarray(dist, dtype=float)
    m = d.shape[0] - 1
    full = 1 << m
    g = np.full((full, max(m, 1)), np.inf)
    tours = np.zeros(full)
    dl = d.tolist()
    rows = [[math.inf] * max(m, 1) for _ in range(full)]
    for j in range(m):
        rows[1 << j][j] = dl[0][j + 1]
    for mask in range(1, full):
        row = rows[mask]
        members = [j for j in range(m) if (mask >> j) & 1]
        for j in members:
            prev = mask ^ (1 << j)
            if prev == 0:
                continue
            prow = rows[prev]
            dj = j + 1
            row[j] = min(prow[i] + dl[i + 1][dj] for i in members if i != j)
        tours[mask] = min(row[j] + dl[j + 1][0] for j in members)
    if full:
        g[:, :] = rows
    return g, tours


def two_opt(tour, dist):
    d = np.asarray(dist, dtype=float)
    t = np.array(tour, dtype=np.intp)
    n = t.size
    moves = 0
    if n < 4:
        return t, 0
    improved = True
    while improved:
        improved = False
        for i in range(n - 1):
            j_hi = n - 1 if i == 0 else n
            j = i + 2
            while j < j_hi:
                a, b = t[i], t[i + 1]
                js = np.arange(j, j_hi)
                c = t[js]
                e = t[(js + 1) % n]
                delta = d[a, c] + d[b, e] - d[a, b] - d[c, e]
                hits = np.flatnonzero(delta < -1e-12)
                if hits.size == 0:
                    break
                jj = int(js[hits[0]])
                t[i + 1 : jj + 1] = t[i + 1 : jj + 1][::-1].copy()
                moves += 1
                improved = True
                j = jj + 1
    return t, moves


def or_opt(tour, dist):
    d = np.asarray(dist, dtype=float)
    t = np.array(tour, dtype=np.intp)
    n = t.size
    moves = 0
    if n < 5:
        return t, 0
    js = np.arange(n)
    improved = True
    while improved:
        improved = False
        for i in range(1, n):
            for L in range(1, 4):
                if i + L - 1 > n - 1:
                    break
                p, s0, sl, nx = t[i - 1], t[i], t[i + L - 1], t[(i + L) % n]
                gain = d[p, nx] - d[p, s0] - d[sl, nx]
                u = t
                v = t[(js + 1) % n]
                base = gain - d[u, v]
                fwd = base + d[u, s0] + d[sl, v]
                rev = base + d[u, sl] + d[s0, v]
                ok = (fwd < -1e-12) | (rev < -1e-12)
                ok[i - 1 : i + L] = False
                hits = np.flatnonzero(ok)
                if hits.size == 0:
                    continue
                j = int(hits[0])
                seg = t[i : i + L] if fwd[j] < -1e-12 else t[i : i + L][::-1]
                rest = np.concatenate((t[:i], t[i + L :]))
                pos = j + 1 if j < i else j - L + 1
                t = np.concatenate((rest[:pos], seg, rest[pos:]))
                moves += 1
                improved = True
                break
    return t, moves
