"""Primitive and L-primitive sets, Erdős sums, and exhaustive antichain oracles.

Under a linear order on the primes, p'(n) and P'(n) are the least and greatest
prime factors of n in that order, with p'(1) = +inf. The L-set of a is
L_a = {ab : P'(a) <= p'(b)}; a set is L-primitive when no element lies in the
L-set of another. Writing the prime factors of n in increasing order,
n lies in L_a exactly when a is a prefix product of that sequence, which gives
a linear-time membership test.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Literal

import numpy as np

from .arith import factorize
from .errors import DomainError, InvalidArgument, PreconditionError, ResourceLimitError

ANTICHAIN_LIMIT = 40


@dataclass(frozen=True)
class PrimeOrder:
    kind: Literal["increasing", "explicit"] = "increasing"
    explicit_list: tuple = ()

    def __post_init__(self):
        if self.kind not in ("increasing", "explicit"):
            raise InvalidArgument(f"unknown order kind {self.kind!r}")
        if len(set(self.explicit_list)) != len(self.explicit_list):
            raise InvalidArgument("explicit_list must hold distinct primes")
        object.__setattr__(self, "explicit_list", tuple(int(p) for p in self.explicit_list))

    @classmethod
    def increasing(cls):
        return cls("increasing")

    @classmethod
    def explicit(cls, primes):
        return cls("explicit", tuple(primes))

    def rank(self, p):
        """Sort key: listed primes first (in list order), then the rest increasing."""
        if self.kind == "explicit":
            pos = self._positions.get(p)
            if pos is not None:
                return pos - len(self.explicit_list)
        return p

    @property
    def _positions(self):
        return {p: i for i, p in enumerate(self.explicit_list)}

    def precedes(self, p, q):
        return self.rank(p) < self.rank(q)

    def primes_before(self, p, sieve):
        """All primes strictly before p in this order (within the sieve)."""
        r = self.rank(p)
        listed = [x for x in self.explicit_list if self.rank(x) < r] if self.kind == "explicit" else []
        pr = sieve.primes
        if r < 0:
            return np.asarray(listed, dtype=np.int64)
        rest = pr[pr < p]
        if listed:
            rest = rest[~np.isin(rest, listed)]
        return np.concatenate([np.asarray(listed, dtype=np.int64), rest])


INCREASING = PrimeOrder()


@dataclass(frozen=True)
class MultiplicativeWeight:
    kind: Literal["z_over_p", "table"] = "z_over_p"
    z: float | None = None
    table: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind == "z_over_p":
            if self.z is None or not 0 <= self.z <= 2:
                raise InvalidArgument("z_over_p needs 0 <= z <= 2 so that f(p) <= 1")
        elif self.kind == "table":
            if any(not 0 <= v <= 1 for v in self.table.values()):
                raise InvalidArgument("table values must lie in [0, 1]")
        else:
            raise InvalidArgument(f"unknown weight kind {self.kind!r}")

    def at_prime(self, p):
        if self.kind == "z_over_p":
            return self.z / p
        try:
            return self.table[p]
        except KeyError:
            raise InvalidArgument(f"weight table has no entry for prime {p}") from None

    def at_primes(self, ps):
        if self.kind == "z_over_p":
            return self.z / np.asarray(ps, dtype=float)
        return np.array([self.at_prime(int(p)) for p in ps], dtype=float)

    def __call__(self, n, sieve):
        if n == 1:
            return 1.0
        out = 1.0
        for p, e in factorize(sieve, n).pairs:
            out *= self.at_prime(p) ** e
        return out


@dataclass
class PrimitiveSetRecord:
    elements: list
    is_primitive: bool
    order: PrimeOrder
    is_l_primitive: bool


def _check_elements(A, sieve):
    A = sorted(int(a) for a in A)
    if A and A[0] < 1:
        raise InvalidArgument("elements must be positive")
    if A and A[-1] > sieve.limit:
        raise InvalidArgument(f"element {A[-1]} exceeds sieve limit {sieve.limit}")
    return A


def is_primitive(A, sieve):
    A = _check_elements(A, sieve)
    if len(set(A)) != len(A):
        return False
    if 1 in A:
        return len(A) == 1
    members = set(A)
    top = A[-1] if A else 0
    # a proper divisor d of a satisfies d <= a/2; test multiples of each element directly
    for a in A:
        for m in range(2 * a, top + 1, a):
            if m in members:
                return False
    return True


def _ordered_factors(n, order, sieve):
    if n == 1:
        return []
    fs = []
    for p, e in factorize(sieve, n).pairs:
        fs.extend([p] * e)
    return sorted(fs, key=order.rank)


def _prefix_products(n, order, sieve):
    """Every a with n in L_a: the prefix products of n's factors in order (n itself included)."""
    out = []
    acc = 1
    for p in _ordered_factors(n, order, sieve):
        acc *= p
        out.append(acc)
    return out


def in_l_set(n, a, order, sieve):
    """Membership n in L_a."""
    if a == 1:
        return True
    if n % a:
        return False
    b = n // a
    if b == 1:
        return True
    big = max((p for p, _ in factorize(sieve, a).pairs), key=order.rank)
    small = min((p for p, _ in factorize(sieve, b).pairs), key=order.rank)
    return order.rank(big) <= order.rank(small)


def is_l_primitive(A, order=INCREASING, sieve=None):
    A = _check_elements(A, sieve)
    if len(set(A)) != len(A):
        return False
    if 1 in A:
        return len(A) == 1
    members = set(A)
    for n in A:
        for a in _prefix_products(n, order, sieve)[:-1]:
            if a in members:
                return False
    return True


def record(A, order=INCREASING, sieve=None):
    A = _check_elements(A, sieve)
    return PrimitiveSetRecord(A, is_primitive(A, sieve), order, is_l_primitive(A, order, sieve))


def erdos_sum(A, z, sieve):
    """f_z(A) = sum z^Omega(a) / (a (log a)^z)."""
    z = float(z)
    A = np.asarray(_check_elements(A, sieve), dtype=np.int64)
    if A.size and A[0] == 1:
        raise DomainError("f_z is undefined at 1")
    if A.size == 0:
        return 0.0
    om = sieve.big_omega[A].astype(float)
    a = A.astype(float)
    return math.fsum(np.exp(om * math.log(z) - np.log(a) - z * np.log(np.log(a)))) if z > 0 else 0.0


class _PrefixLog:
    """Compensated prefix sums of log(1 - f(p)) along a prime order."""

    def __init__(self, primes, fvals):
        self.primes = primes
        logs = np.log1p(-fvals)
        out = np.empty(logs.size + 1)
        s = c = 0.0
        out[0] = 0.0
        for i, x in enumerate(logs.tolist()):
            y = x - c
            t = s + y
            c = (t - s) - y
            s = t
            out[i + 1] = s
        self.cum = out


@lru_cache(maxsize=64)
def _increasing_prefix(z, top, sieve):
    pr = sieve.primes[sieve.primes <= top]
    return _PrefixLog(pr, z / pr.astype(float))


def _greatest_in_order(n, order, sieve):
    if order.kind == "increasing":
        return int(sieve.lpf[n])
    return max((p for p, _ in factorize(sieve, n).pairs), key=order.rank)


def _weighted_l_sum(A, f, order, sieve):
    """sum_a f(a) prod_{p before P'(a)} (1 - f(p))."""
    A = _check_elements(A, sieve)
    if not A:
        return 0.0
    if f.kind == "z_over_p" and order.kind == "increasing" and A[0] >= 2:
        z = float(f.z)
        arr = np.asarray(A, dtype=np.int64)
        big = sieve.lpf[arr].astype(np.int64)
        pre = _increasing_prefix(z, int(big.max()), sieve)
        idx = np.searchsorted(pre.primes, big)  # number of primes below P(a)
        om = sieve.big_omega[arr].astype(float)
        with np.errstate(divide="ignore"):
            logf = om * math.log(z) - np.log(arr.astype(float)) if z > 0 else np.full(arr.size, -np.inf)
        return math.fsum(np.exp(logf + pre.cum[idx]))
    terms = []
    for a in A:
        if a == 1:
            terms.append(1.0)
            continue
        big = _greatest_in_order(a, order, sieve)
        before = order.primes_before(big, sieve)
        prod = math.exp(math.fsum(np.log1p(-f.at_primes(before)))) if before.size else 1.0
        terms.append(f(a, sieve) * prod)
    return math.fsum(terms)


def dz_of_L(A, z, order=INCREASING, sieve=None):
    """d_z(L_A) = sum_a z^Omega(a)/a prod_{p before P'(a)} (1 - z/p)."""
    z = float(z)
    if not 0 < z < 2:
        raise DomainError("d_z needs 0 < z < 2")
    return _weighted_l_sum(A, MultiplicativeWeight("z_over_p", z), order, sieve)


def erdos_inequality_check(A, f, order=INCREASING, sieve=None, tol=1e-12):
    """(lhs, pass) for sum_a f(a) prod_{p before P'(a)} (1 - f(p)) <= 1."""
    if not is_l_primitive(A, order, sieve):
        raise PreconditionError("the inequality is only claimed for L-primitive sets")
    lhs = _weighted_l_sum(A, f, order, sieve)
    return lhs, lhs <= 1 + tol


def _divisor_masks(lo, hi):
    """Bit i (element lo + i): mask of the other elements in [lo, hi] comparable to it."""
    n = hi - lo + 1
    masks = [0] * n
    for i in range(n):
        a = lo + i
        for m in range(2 * a, hi + 1, a):
            j = m - lo
            masks[i] |= 1 << j
            masks[j] |= 1 << i
    return masks


def enumerate_antichains(range_hi, sieve=None, range_lo=1):
    """Yield every antichain of [range_lo, range_hi] once, as ascending lists.

    Depth-first over elements in decreasing order; choosing x forbids its
    divisors (its multiples were already decided). Order: a set is emitted
    before its extensions, candidate elements are tried largest first.
    """
    if range_hi > ANTICHAIN_LIMIT:
        raise ResourceLimitError(f"antichain enumeration is capped at range_hi <= {ANTICHAIN_LIMIT}")
    lo = int(range_lo)
    hi = int(range_hi)
    if lo < 1:
        raise InvalidArgument("range_lo must be positive")
    divs = {x: [d for d in range(lo, x) if x % d == 0] for x in range(lo, hi + 1)}
    stack = [(hi, frozenset(), ())]
    while stack:
        top, banned, chosen = stack.pop()
        yield sorted(chosen)
        # push smaller candidates first so that larger ones pop first
        for x in range(lo, top + 1):
            if x not in banned:
                stack.append((x - 1, banned.union(divs[x]), chosen + (x,)))


def antichains_bitmask(range_hi, range_lo=1):
    """Independent oracle: scan all subsets of [range_lo, range_hi] as bitmasks."""
    if range_hi - range_lo + 1 > 24:
        raise ResourceLimitError("bitmask oracle is capped at 24 elements")
    masks = _divisor_masks(range_lo, range_hi)
    n = range_hi - range_lo + 1
    out = []
    for s in range(1 << n):
        ok = True
        t = s
        while t:
            low = t & -t
            i = low.bit_length() - 1
            if s & masks[i]:
                ok = False
                break
            t ^= low
        if ok:
            out.append([range_lo + i for i in range(n) if s >> i & 1])
    return out


def lset_disjointness_check(A, order=INCREASING, B_hi=100, sieve=None):
    """Check that the sets L_a, a in A, are pairwise disjoint on [1, B_hi].

    Returns (pass, collisions) where collisions lists (n, [a, a', ...]).
    """
    if not is_l_primitive(A, order, sieve):
        raise PreconditionError("L-set disjointness is only claimed for L-primitive sets")
    members = set(int(a) for a in A)
    if B_hi > sieve.limit:
        raise InvalidArgument("B_hi exceeds sieve limit")
    collisions = []
    for n in range(1, B_hi + 1):
        if 1 in members:
            owners = [1] + [a for a in _prefix_products(n, order, sieve) if a in members]
        else:
            owners = [a for a in _prefix_products(n, order, sieve) if a in members]
        if len(owners) > 1:
            collisions.append((n, owners))
    return not collisions, collisions


def odd_prime(i, sieve):
    odd = sieve.primes[sieve.primes > 2]
    if i < 1 or i > odd.size:
        raise InvalidArgument("odd prime index out of sieve range")
    return int(odd[i - 1])


def tightness_layer(i, C_i, x_hi, sieve, exclude_two=False):
    """A_i = {p_i b : (b, P_i) = 1, Omega(b) = C_i} truncated to [1, x_hi].

    p_i is the i-th odd prime and P_i the product of the first i odd primes.
    With ``exclude_two`` the factor 2 is also banned from b.
    """
    if x_hi > sieve.limit:
        raise InvalidArgument("x_hi exceeds sieve limit")
    p = odd_prime(i, sieve)
    banned = [odd_prime(j, sieve) for j in range(1, i + 1)]
    if exclude_two:
        banned.append(2)
    b = np.arange(1, x_hi // p + 1, dtype=np.int64)
    keep = sieve.big_omega[b] == C_i
    for q in banned:
        keep &= b % q != 0
    out = (p * b[keep]).tolist()
    return [int(x) for x in out]
