# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: linear sieve, factorization-statistics tables, Dinic max flow.

Every function here has a drop-in twin in :mod:`primlab._fallback`; the two
must agree exactly (the test-suite checks this when the extension is built).
"""
import numpy as np
cimport numpy as cnp

cnp.import_array()


def spf_table(Py_ssize_t limit):
    """Smallest-prime-factor table of length ``limit + 1`` (entries 0 and 1 are 0)."""
    cdef cnp.ndarray[cnp.int32_t, ndim=1] spf = np.zeros(limit + 1, dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] primes = np.empty(limit // 2 + 16, dtype=np.int32)
    cdef cnp.int32_t[::1] s = spf
    cdef cnp.int32_t[::1] pr = primes
    cdef Py_ssize_t n, j, npr = 0, m
    cdef cnp.int32_t p, sn
    for n in range(2, limit + 1):
        if s[n] == 0:
            s[n] = <cnp.int32_t>n
            pr[npr] = <cnp.int32_t>n
            npr += 1
        sn = s[n]
        for j in range(npr):
            p = pr[j]
            if p > sn:
                break
            m = n * p
            if m > limit:
                break
            s[m] = p
    return spf


def factor_tables(const cnp.int32_t[::1] spf):
    """Return (Omega, omega, largest prime factor) tables derived from ``spf``."""
    cdef Py_ssize_t n, m, size = spf.shape[0]
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] big = np.zeros(size, dtype=np.uint8)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] small = np.zeros(size, dtype=np.uint8)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] lpf = np.zeros(size, dtype=np.int32)
    cdef cnp.uint8_t[::1] bo = big
    cdef cnp.uint8_t[::1] so = small
    cdef cnp.int32_t[::1] lp = lpf
    cdef cnp.int32_t p
    if size > 1:
        lp[1] = 1
    for n in range(2, size):
        p = spf[n]
        m = n // p
        bo[n] = bo[m] + 1
        if m == 1:
            so[n] = 1
            lp[n] = p
        else:
            so[n] = so[m] + (1 if spf[m] != p else 0)
            lp[n] = lp[m] if lp[m] > p else p
    return big, small, lpf


def dinic(Py_ssize_t n_nodes, cnp.int64_t[::1] start, cnp.int64_t[::1] order,
          cnp.int64_t[::1] head, double[::1] res, Py_ssize_t source, Py_ssize_t sink,
          double eps):
    """Push a maximum flow through residual capacities ``res`` (modified in place).

    Arcs come in pairs ``2e`` / ``2e + 1``; ``order[start[v]:start[v+1]]`` lists the
    arcs leaving ``v``. Residuals at or below ``eps`` count as saturated.
    """
    cdef cnp.ndarray[cnp.int64_t, ndim=1] level_arr = np.empty(n_nodes, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] it_arr = np.empty(n_nodes, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] queue_arr = np.empty(n_nodes, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] path_arr = np.empty(n_nodes + 1, dtype=np.int64)
    cdef cnp.int64_t[::1] level = level_arr
    cdef cnp.int64_t[::1] it = it_arr
    cdef cnp.int64_t[::1] queue = queue_arr
    cdef cnp.int64_t[::1] path = path_arr
    cdef double total = 0.0, push
    cdef Py_ssize_t qh, qt, v, w, a, k, depth, i
    cdef bint advanced
    while True:
        for i in range(n_nodes):
            level[i] = -1
        level[source] = 0
        queue[0] = source
        qh = 0
        qt = 1
        while qh < qt:
            v = queue[qh]
            qh += 1
            for k in range(start[v], start[v + 1]):
                a = order[k]
                w = head[a]
                if level[w] < 0 and res[a] > eps:
                    level[w] = level[v] + 1
                    queue[qt] = w
                    qt += 1
        if level[sink] < 0:
            break
        for i in range(n_nodes):
            it[i] = start[i]
        depth = 0
        v = source
        while True:
            if v == sink:
                push = res[path[0]]
                for i in range(1, depth):
                    if res[path[i]] < push:
                        push = res[path[i]]
                for i in range(depth):
                    res[path[i]] -= push
                    res[path[i] ^ 1] += push
                total += push
                depth = 0
                v = source
                continue
            advanced = False
            while it[v] < start[v + 1]:
                a = order[it[v]]
                w = head[a]
                if res[a] > eps and level[w] == level[v] + 1:
                    path[depth] = a
                    depth += 1
                    v = w
                    advanced = True
                    break
                it[v] += 1
            if not advanced:
                level[v] = -1
                if depth == 0:
                    break
                depth -= 1
                a = path[depth]
                v = head[a ^ 1]
                it[v] += 1
    return total
