"""z-logarithmic density of primitive subsets of [1, N].

The optimum max_A sum_{a in A} h_z(a), h_z(n) = z^Omega(n) / n, over primitive
A in [1, N] is a maximum-weight antichain of the divisibility poset. It equals
the minimum value of a flow on the covering graph (a -> ap) in which each
element carries a lower bound h_z(a) on its node arc. That minimum is
computed as (any feasible flow) - (maximum flow from sink back to source in
the residual network); the final residual cut yields an optimal antichain.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import _core, _fallback
from .errors import InvalidArgument, PrimlabError, ResourceLimitError

FLOW_LIMIT = 10**5
BRUTE_LIMIT = 40
EXACT_LIMIT = 10**3
CERT_TOL = 1e-9


def h_weight(n, z, omega):
    return z**omega / n


@dataclass(eq=False)
class DivisibilityPoset:
    n_hi: int
    z: float
    sieve: object = field(repr=False)
    exact: bool = False

    def __post_init__(self):
        if self.n_hi < 1:
            raise InvalidArgument("N must be positive")
        if self.n_hi > self.sieve.limit:
            raise InvalidArgument("N exceeds sieve limit")
        if not self.z > 0:
            raise InvalidArgument("z must be positive")

    @cached_property
    def covers(self):
        """Covering pairs (a, a p) as two int64 arrays."""
        N = self.n_hi
        pr = self.sieve.primes[self.sieve.primes <= N]
        lo, hi = [], []
        for p in pr.tolist():
            a = np.arange(1, N // p + 1, dtype=np.int64)
            lo.append(a)
            hi.append(a * p)
        if not lo:
            return np.zeros(0, np.int64), np.zeros(0, np.int64)
        return np.concatenate(lo), np.concatenate(hi)

    @cached_property
    def weights(self):
        """h_z(n) for n = 0..N (entry 0 unused)."""
        N = self.n_hi
        om = self.sieve.big_omega[: N + 1].astype(float)
        n = np.arange(N + 1, dtype=float)
        n[0] = 1.0
        w = np.exp(om * math.log(self.z)) / n
        w[0] = 0.0
        return w

    def exact_weights(self):
        z = Fraction(self.z).limit_denominator(10**6) if not isinstance(self.z, Fraction) else self.z
        om = self.sieve.big_omega
        return [Fraction(0)] + [z ** int(om[n]) / n for n in range(1, self.n_hi + 1)]


@dataclass
class AntichainSolution:
    elements: list
    weight: float
    method: str
    certificate: dict | None = None

    @property
    def certificate_ok(self):
        return None if self.certificate is None else self.certificate["ok"]


def denominator_sum(N, z, sieve, exact=False):
    """sum_{n <= N} z^Omega(n) / n."""
    if N > sieve.limit:
        raise InvalidArgument("N exceeds sieve limit")
    if exact:
        zf = Fraction(z).limit_denominator(10**6) if not isinstance(z, Fraction) else z
        om = sieve.big_omega
        return sum((zf ** int(om[n]) / n for n in range(1, N + 1)), Fraction(0))
    om = sieve.big_omega[1 : N + 1].astype(float)
    n = np.arange(1, N + 1, dtype=float)
    return math.fsum(np.exp(om * math.log(z)) / n)


def _initial_flow(poset, w):
    """A feasible flow: each n sends h_z(n) from 1 up the tree m -> m P, then along n -> 2n -> 4n ...

    Returns (subtree weight sums, doubling-chain sums, tree parent) indexed by element.
    """
    N = poset.n_hi
    lpf = poset.sieve.lpf[: N + 1].astype(np.int64)
    idx = np.arange(N + 1, dtype=np.int64)
    parent = np.where(idx >= 2, idx // np.maximum(lpf, 1), 0)
    exact = not isinstance(w, np.ndarray)
    if exact:
        sub = list(w)
        for v in range(N, 1, -1):
            sub[int(parent[v])] += sub[v]
        down = list(w)
        for x in range(2, N + 1, 2):
            down[x] += down[x // 2]
    else:
        sub = w.copy()
        # children of a node lie in higher dyadic blocks, so sweep blocks top-down
        hi = N + 1
        while hi > 2:
            lo = max(2, (hi + 1) // 2)
            blk = np.arange(lo, hi)
            np.add.at(sub, parent[blk], sub[blk])
            hi = lo
        down = w.copy()
        lo = 2
        while lo <= N:
            hi2 = min(2 * lo, N + 1)
            evens = np.arange(lo + (lo & 1), hi2, 2)
            down[evens] += down[evens // 2]
            lo = hi2
    return sub, down, parent


def _solve_flow(poset, exact=False):
    N = poset.n_hi
    if N > FLOW_LIMIT:
        raise ResourceLimitError(f"flow solve is guarded at N <= {FLOW_LIMIT}")
    if exact and N > EXACT_LIMIT:
        raise ResourceLimitError(f"exact rational flow is guarded at N <= {EXACT_LIMIT}")
    w = poset.exact_weights() if exact else poset.weights
    sub, down, parent = _initial_flow(poset, w)
    total = sub[1]
    big = (total * 4 + 1) if exact else float(total) * 4 + 1.0
    zero = Fraction(0) if exact else 0.0

    # node ids: s = 0, t = 1, n_in = 2n, n_out = 2n + 1
    c_lo, c_hi = poset.covers
    # flow on cover arc a -> b: tree part (a is parent of b) plus the doubling part (b = 2a)
    tails, heads = [], []
    # node arcs
    nodes = np.arange(1, N + 1, dtype=np.int64)
    tails.append(2 * nodes)
    heads.append(2 * nodes + 1)
    node_flow = [zero] * (N + 1)
    for v in range(1, N + 1):
        node_flow[v] = sub[v] + down[v] - w[v]
    # cover arcs
    tails.append(2 * c_lo + 1)
    heads.append(2 * c_hi)
    # source and sink arcs
    maximal = np.arange(N // 2 + 1, N + 1, dtype=np.int64)
    tails.append(np.array([0], dtype=np.int64))
    heads.append(np.array([2], dtype=np.int64))
    tails.append(2 * maximal + 1)
    heads.append(np.ones(maximal.size, dtype=np.int64))
    tail = np.concatenate(tails)
    head = np.concatenate(heads)
    n_arcs = tail.size

    cover_tree = parent[c_hi] == c_lo
    cover_down = c_hi == 2 * c_lo
    if exact:
        cflow = [(sub[int(b)] if t else zero) + (down[int(a)] if d else zero)
                 for a, b, t, d in zip(c_lo.tolist(), c_hi.tolist(), cover_tree.tolist(), cover_down.tolist())]
        fl = node_flow[1:] + cflow + [total] + [down[int(x)] for x in maximal.tolist()]
        lower = list(w[1:]) + [zero] * (n_arcs - N)
    else:
        cflow = np.where(cover_tree, sub[c_hi], 0.0) + np.where(cover_down, down[c_lo], 0.0)
        fl = np.concatenate([np.asarray(node_flow[1:], dtype=float), cflow, [float(total)], down[maximal]])
        lower = np.concatenate([w[1:], np.zeros(n_arcs - N)])

    # residual pairs: 2e = forward (increase, unbounded), 2e + 1 = backward (decrease down to the lower bound)
    # the max flow runs from t to s, i.e. against the original direction
    all_tail = np.empty(2 * n_arcs, dtype=np.int64)
    all_head = np.empty(2 * n_arcs, dtype=np.int64)
    all_tail[0::2] = tail
    all_head[0::2] = head
    all_tail[1::2] = head
    all_head[1::2] = tail
    if exact:
        res = [None] * (2 * n_arcs)
        for e in range(n_arcs):
            res[2 * e] = big
            res[2 * e + 1] = fl[e] - lower[e]
    else:
        res = np.empty(2 * n_arcs)
        res[0::2] = big
        res[1::2] = fl - lower
    n_nodes = 2 * N + 2
    order = np.argsort(all_tail, kind="stable").astype(np.int64)
    start = np.searchsorted(all_tail[order], np.arange(n_nodes + 1)).astype(np.int64)

    if exact:
        pushed = _fallback.dinic(n_nodes, start, order, all_head, res, 1, 0, 0)
        eps = 0
    else:
        eps = 1e-12 * max(1.0, float(total))
        pushed = _core.dinic(n_nodes, start, order, all_head, res, 1, 0, eps)
    value = total - pushed if exact else float(total - pushed)

    # t-side of the final cut: nodes reachable from t in the residual
    seen = np.zeros(n_nodes, dtype=bool)
    seen[1] = True
    stack = [1]
    while stack:
        v = stack.pop()
        for k in range(start[v], start[v + 1]):
            a = order[k]
            u = all_head[a]
            if not seen[u] and res[a] > eps:
                seen[u] = True
                stack.append(u)
    if seen[0]:
        raise PrimlabError("internal error: residual still connects sink to source")
    # element n is cut when n_in sits on the source side and n_out on the sink side
    chosen = [n for n in range(1, N + 1) if not seen[2 * n] and seen[2 * n + 1]]
    return chosen, value, w


def _brute(poset, exact=False):
    """Exact maximum-weight antichain by branch and bound over comparability bitmasks."""
    N = poset.n_hi
    if N > BRUTE_LIMIT:
        raise ResourceLimitError(f"brute-force search is guarded at N <= {BRUTE_LIMIT}")
    w = poset.exact_weights() if exact else poset.weights
    zero = Fraction(0) if exact else 0.0
    comp = [0] * (N + 1)
    for a in range(1, N + 1):
        for m in range(2 * a, N + 1, a):
            comp[a] |= 1 << m
            comp[m] |= 1 << a
    memo = {}

    def best(mask):
        if mask == 0:
            return zero, 0
        hit = memo.get(mask)
        if hit is not None:
            return hit
        v = mask.bit_length() - 1
        rest = mask & ~(1 << v)
        skip = best(rest)
        take_w, take_set = best(rest & ~comp[v])
        take = (take_w + w[v], take_set | (1 << v))
        out = take if take[0] > skip[0] else skip
        memo[mask] = out
        return out

    full = sum(1 << n for n in range(1, N + 1))
    val, bits = best(full)
    return [n for n in range(1, N + 1) if bits >> n & 1], val


def max_weight_antichain(poset, method="auto", exact=False):
    if method == "auto":
        method = "brute" if poset.n_hi <= 16 else "flow"
    if method == "brute":
        elems, val = _brute(poset, exact)
        return AntichainSolution(elems, val if exact else float(val), "brute")
    if method != "flow":
        raise InvalidArgument(f"unknown method {method!r}")
    elems, value, w = _solve_flow(poset, exact=exact)
    primal = sum((w[n] for n in elems), Fraction(0)) if exact else math.fsum(w[n] for n in elems)
    if exact:
        ok = primal == value
        gap = float(abs(primal - value))
    else:
        gap = abs(primal - value)
        ok = gap <= CERT_TOL * max(1.0, abs(value))
    if not _is_antichain(elems):
        ok = False
    cert = {"kind": "residual-cut", "flow_value": value, "ok": bool(ok), "gap": float(gap)}
    return AntichainSolution(elems, primal, "flow", cert)


def _is_antichain(elems):
    s = set(elems)
    top = max(elems) if elems else 0
    return all(m not in s for a in elems for m in range(2 * a, top + 1, a))


def d_z_density(N, z, sieve, method="auto", exact=False):
    poset = DivisibilityPoset(N, z, sieve)
    sol = max_weight_antichain(poset, method, exact=exact)
    den = denominator_sum(N, z, sieve, exact=exact)
    return sol.weight / den, sol, den


def layer_heuristic(N, z, sieve):
    """(k*, weight, density) for the layer k* = floor(z log log N)."""
    if N < 16:
        raise InvalidArgument("layer heuristic needs N >= 16")
    k = int(math.floor(z * math.log(math.log(N))))
    om = sieve.big_omega[1 : N + 1]
    n = np.flatnonzero(om == k) + 1
    weight = math.fsum(z**k / n.astype(float))
    return k, weight, weight / denominator_sum(N, z, sieve)


@dataclass
class SarkozyReport:
    z: float
    bound: float
    rows: list
    passed: bool


def sarkozy_bound_check(z, N_grid, sieve):
    """D_z(N) >= (1 - 2/z) / 3 for z > 2, with the exact optimum at every grid N."""
    if not z > 2:
        raise InvalidArgument("the bound is claimed for z > 2")
    bound = (1 - 2 / z) / 3
    rows = []
    for N in N_grid:
        if N < 4:
            raise InvalidArgument("the bound is claimed from N = 4 on")
        d, sol, _ = d_z_density(N, z, sieve)
        rows.append({"N": int(N), "D": d, "bound": bound, "pass": d >= bound,
                     "certificate_ok": sol.certificate_ok})
    return SarkozyReport(z, bound, rows, all(r["pass"] for r in rows))
