"""Integer substrate: smallest-prime-factor sieve, factorizations, layer counts.

A :class:`FactorSieve` is immutable once built; the derived tables (Omega,
omega, largest prime factor, primes) are computed on first use and cached.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import _core
from .errors import InvalidArgument, ResourceLimitError

DEFAULT_SIEVE_LIMIT = 10**7
# spf (4 bytes) + Omega + omega (1 byte each) + largest prime factor (4 bytes)
BYTES_PER_ENTRY = 10
MEMORY_BUDGET = int(os.environ.get("PRIMLAB_MEMORY_BUDGET", 2 * 1024**3))


@dataclass(frozen=True)
class Factorization:
    n: int
    pairs: tuple

    @property
    def big_omega(self):
        return sum(e for _, e in self.pairs)

    @property
    def small_omega(self):
        return len(self.pairs)

    @property
    def primes(self):
        return [p for p, _ in self.pairs]

    def value(self):
        out = 1
        for p, e in self.pairs:
            out *= p**e
        return out


@dataclass(frozen=True, eq=False)
class FactorSieve:
    limit: int
    spf: np.ndarray = field(repr=False)

    @cached_property
    def _tables(self):
        return _core.factor_tables(self.spf)

    @property
    def big_omega(self):
        """Omega(n) for 0 <= n <= limit (entries 0 and 1 are 0)."""
        return self._tables[0]

    @property
    def small_omega(self):
        return self._tables[1]

    @property
    def lpf(self):
        """Largest prime factor P(n); lpf[1] = 1."""
        return self._tables[2]

    @cached_property
    def primes(self):
        idx = np.arange(self.spf.shape[0])
        return idx[(self.spf == idx) & (idx >= 2)].astype(np.int64)

    def is_prime(self, n):
        return 2 <= n <= self.limit and int(self.spf[n]) == n

    def check_range(self, n, lo=1):
        if not lo <= n <= self.limit:
            raise InvalidArgument(f"{n} outside sieve range [{lo}, {self.limit}]")

    def prime_index(self, p):
        """Number of primes strictly below ``p``."""
        return int(np.searchsorted(self.primes, p, side="left"))


def build_sieve(limit):
    limit = int(limit)
    if limit < 2:
        raise InvalidArgument("sieve limit must be at least 2")
    if limit * BYTES_PER_ENTRY > MEMORY_BUDGET:
        raise ResourceLimitError(
            f"sieve limit {limit} needs ~{limit * BYTES_PER_ENTRY} bytes, budget is {MEMORY_BUDGET}"
        )
    spf = _core.spf_table(limit)
    spf.setflags(write=False)
    return FactorSieve(limit, spf)


_SHARED = {}


def shared_sieve(limit):
    """Process-wide cache of sieves; any cached sieve at least as large is reused."""
    for lim, sv in _SHARED.items():
        if lim >= limit:
            return sv
    sv = build_sieve(limit)
    _SHARED.clear()
    _SHARED[limit] = sv
    return sv


def factorize(sieve, n):
    n = orig = int(n)
    sieve.check_range(n, lo=2)
    spf = sieve.spf
    pairs = []
    while n > 1:
        p = int(spf[n])
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        pairs.append((p, e))
    return Factorization(orig, tuple(pairs))


def big_omega(sieve, n):
    sieve.check_range(n)
    return int(sieve.big_omega[n])


def small_omega(sieve, n):
    sieve.check_range(n)
    return int(sieve.small_omega[n])


def smallest_prime_factor(sieve, n):
    sieve.check_range(n, lo=2)
    return int(sieve.spf[n])


def largest_prime_factor(sieve, n):
    sieve.check_range(n, lo=2)
    return int(sieve.lpf[n])


def count_layer(sieve, k, x):
    """N_k(x) = #{1 <= n <= x : Omega(n) = k}."""
    if k < 0:
        raise InvalidArgument("k must be nonnegative")
    x = int(x)
    if x > sieve.limit:
        raise InvalidArgument(f"x={x} exceeds sieve limit {sieve.limit}")
    if x < 1:
        return 0
    return int(np.count_nonzero(sieve.big_omega[1 : x + 1] == k))


def enumerate_layer(sieve, k, x):
    if k < 0:
        raise InvalidArgument("k must be nonnegative")
    x = int(x)
    if x > sieve.limit:
        raise InvalidArgument(f"x={x} exceeds sieve limit {sieve.limit}")
    if x < 1:
        return []
    return (np.flatnonzero(sieve.big_omega[1 : x + 1] == k) + 1).tolist()


def layer_counts(sieve, k, x_max):
    """Array c with c[x] = N_k(x) for 0 <= x <= x_max."""
    sieve.check_range(x_max)
    hit = sieve.big_omega[: x_max + 1] == k
    hit[0] = False
    return np.cumsum(hit, dtype=np.int64)


def nk_bound(k, x):
    return 1.35 * k**3 * x * np.log(x) / 2.0**k


@dataclass
class BoundReport:
    rows: list
    failures: list
    checked: int

    @property
    def passed(self):
        return not self.failures


def check_nk_bound(sieve, k_max, x_max, x_grid=None):
    """Compare N_k(x) with 1.35 k^3 x log x / 2^k for 1 <= k <= k_max.

    With ``x_grid=None`` every integer 3 <= x <= x_max is checked and ``rows``
    holds the tightest (largest count/bound) point per k; otherwise ``rows``
    lists every grid point.
    """
    if x_max > sieve.limit:
        raise InvalidArgument(f"x_max={x_max} exceeds sieve limit {sieve.limit}")
    xs = np.arange(3, x_max + 1) if x_grid is None else np.asarray(sorted(x_grid), dtype=np.int64)
    if xs.size and xs[0] < 3:
        raise InvalidArgument("the bound is only claimed for x >= 3")
    rows, failures = [], []
    for k in range(1, k_max + 1):
        counts = layer_counts(sieve, k, x_max)[xs]
        bound = nk_bound(k, xs.astype(float))
        ok = counts <= bound
        for i in np.flatnonzero(~ok):
            failures.append((k, int(xs[i]), int(counts[i]), float(bound[i])))
        if x_grid is None:
            i = int(np.argmax(counts / bound)) if xs.size else None
            if i is not None:
                rows.append((k, int(xs[i]), int(counts[i]), float(bound[i]), bool(ok[i])))
        else:
            rows.extend(
                (k, int(x), int(c), float(b), bool(o)) for x, c, b, o in zip(xs, counts, bound, ok)
            )
    return BoundReport(rows, failures, int(xs.size) * k_max)


def divisor_bound_check(sieve, Z, A):
    """Return (G(Z, A), 1.123 2^-A Z log(Z + 2), pass) with G(Z, A) = #{n <= Z : omega(n) >= A}."""
    Z = int(Z)
    if Z > sieve.limit:
        raise InvalidArgument(f"Z={Z} exceeds sieve limit {sieve.limit}")
    if Z < 1:
        raise InvalidArgument("Z must be positive")
    g = int(np.count_nonzero(sieve.small_omega[1 : Z + 1] >= A))
    bound = 1.123 * 2.0 ** (-A) * Z * math.log(Z + 2)
    return g, bound, g <= bound


def divisor_bound_sweep(sieve, Z_max, A_values):
    """Check G(Z, A) <= 1.123 2^-A Z log(Z+2) for every 1 <= Z <= Z_max and A in A_values."""
    sieve.check_range(Z_max)
    om = sieve.small_omega[: Z_max + 1]
    Z = np.arange(1, Z_max + 1, dtype=float)
    failures = []
    worst = []
    for A in A_values:
        hit = om >= A
        hit[0] = False
        G = np.cumsum(hit)[1:]
        bound = 1.123 * 2.0 ** (-A) * Z * np.log(Z + 2)
        bad = np.flatnonzero(G > bound)
        failures.extend((int(Z[i]), A, int(G[i]), float(bound[i])) for i in bad)
        i = int(np.argmax(G / bound))
        worst.append((int(Z[i]), A, int(G[i]), float(bound[i])))
    return BoundReport(worst, failures, Z_max * len(A_values))
