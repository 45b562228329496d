"""Pure-Python / numpy versions of the kernels in ``_kernels.pyx``.

Used when the compiled extension is unavailable or ``PRIMLAB_PURE_PYTHON=1``.
The flow routine is also the exact-rational path: it never assumes floats.
"""
from collections import deque

import numpy as np


def spf_table(limit):
    spf = np.zeros(limit + 1, dtype=np.int32)
    r = int(limit ** 0.5)
    while (r + 1) * (r + 1) <= limit:
        r += 1
    for p in range(2, r + 1):
        if spf[p] == 0:
            block = spf[p * p::p]
            block[block == 0] = p
    rest = np.flatnonzero(spf == 0)
    rest = rest[rest >= 2]
    spf[rest] = rest
    return spf


def factor_tables(spf):
    size = spf.shape[0]
    big = np.zeros(size, dtype=np.uint8)
    small = np.zeros(size, dtype=np.uint8)
    lpf = np.zeros(size, dtype=np.int32)
    if size > 1:
        lpf[1] = 1
    # n // spf(n) <= n // 2, so each dyadic block depends only on earlier blocks
    lo = 2
    while lo < size:
        hi = min(2 * lo, size)
        n = np.arange(lo, hi)
        p = spf[lo:hi].astype(np.int64)
        m = n // p
        big[lo:hi] = big[m] + 1
        unit = m == 1
        sm = spf[m]
        small[lo:hi] = np.where(unit, 1, small[m] + (sm != p))
        lpf[lo:hi] = np.where(unit, p, np.maximum(lpf[m], p))
        lo = hi
    return big, small, lpf


def dinic(n_nodes, start, order, head, res, source, sink, eps):
    start = [int(x) for x in start]
    adj = [[int(order[k]) for k in range(start[v], start[v + 1])] for v in range(n_nodes)]
    head = [int(h) for h in head]
    # keeps the element type (float or Fraction) of the capacities
    total = res[0] - res[0] if len(res) else 0
    while True:
        level = [-1] * n_nodes
        level[source] = 0
        queue = deque([source])
        while queue:
            v = queue.popleft()
            for a in adj[v]:
                w = head[a]
                if level[w] < 0 and res[a] > eps:
                    level[w] = level[v] + 1
                    queue.append(w)
        if level[sink] < 0:
            return total
        it = [0] * n_nodes
        path = []
        v = source
        while True:
            if v == sink:
                push = min(res[a] for a in path)
                for a in path:
                    res[a] -= push
                    res[a ^ 1] += push
                total += push
                path.clear()
                v = source
                continue
            arcs = adj[v]
            lv = level[v] + 1
            i = it[v]
            while i < len(arcs):
                a = arcs[i]
                if res[a] > eps and level[head[a]] == lv:
                    break
                i += 1
            it[v] = i
            if i < len(arcs):
                path.append(arcs[i])
                v = head[arcs[i]]
                continue
            level[v] = -1
            if not path:
                break
            a = path.pop()
            v = head[a ^ 1]
            it[v] += 1
