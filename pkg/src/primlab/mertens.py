"""Partial Euler products and Mertens-normalized quantities.

    mu_x(z) = (e^gamma log x prod_{p<x} (1 - 1/p))^z * prod_{p>=x} (1 - z/p)^-1 (1 - 1/p)^z
            = e^(gamma z) C_z (log x)^z prod_{p<x} (1 - z/p)

m_q(z) is the infimum of mu_p(z) over primes p >= q, M_q(z) the supremum and
r_q(z) the supremum of M_p(z) / mu_p(z). Explicit evaluation runs over the
primes up to ``cutoff`` (default 300); beyond it, uniform brackets are used:
mu_p(1) lies in [1 - 1/(2 log^2 p), 1 + min(1/(2 log^2(2e9)), 1/(2 log^2 p))]
for p >= 300, and the factor product over p > cutoff is bracketed either by
its rigorously computed value (``mode="computed"``) or by the fixed constants
0.9998^z / 1.0005 (``mode="published"``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .arith import shared_sieve
from .errors import DomainError, InvalidArgument
from .special import EULER_GAMMA, _euler_tail_log, euler_constant_product

# relative outward slack on every floating-point bracket
SLACK = 1e-12
BRACKET_CUTOFF = 300
MU1_UPPER_CAP = 1.0 / (2 * math.log(2e9) ** 2)
PUBLISHED_LOWER_TAIL = 0.9998
PUBLISHED_UPPER_TAIL = 1.0005


@dataclass(frozen=True)
class EulerProductState:
    z: float
    cutoff_x: float
    log_value: float
    err: float
    degenerate: bool = False

    @property
    def value(self):
        return 0.0 if self.degenerate else math.exp(self.log_value)


@dataclass(frozen=True)
class MertensBundle:
    q: int
    z: float
    mu: float
    m_lower: float
    M_upper: float
    r_upper: float
    mu_lower: float
    mu_upper: float
    mode: str = "computed"

    def as_dict(self):
        return {"q": self.q, "z": self.z, "mu": self.mu, "m_lower": self.m_lower,
                "M_upper": self.M_upper, "r_upper": self.r_upper,
                "mu_lower": self.mu_lower, "mu_upper": self.mu_upper, "mode": self.mode}


def _primes_upto(x):
    sv = shared_sieve(max(int(x), 1000))
    pr = sv.primes
    return pr[pr <= x]


def _primes_below(x):
    sv = shared_sieve(max(int(math.ceil(x)), 1000))
    pr = sv.primes
    return pr[pr < x]


def euler_product(z, x):
    """prod_{p < x} (1 - z/p) as a log-sum."""
    z = float(z)
    x = float(x)
    if not 0 <= z <= 2:
        raise DomainError("euler_product needs 0 <= z <= 2")
    if x < 2:
        raise InvalidArgument("x must be at least 2")
    if z == 2 and x > 2:
        return EulerProductState(z, x, -math.inf, 0.0, degenerate=True)
    pr = _primes_below(x).astype(float)
    terms = np.log1p(-z / pr)
    return EulerProductState(z, x, math.fsum(terms), 4 * np.finfo(float).eps * float(np.abs(terms).sum()))


def c_z_const(z, cutoff=10**6):
    """C_z = prod_p (1 - z/p)^-1 (1 - 1/p)^z; returns (value, error bound)."""
    z = float(z)
    if not 0 < z < 2:
        raise DomainError("C_z needs 0 < z < 2")
    v, rel = euler_constant_product(z, 2, cutoff)
    return v, v * rel


def _log_mu1(x):
    """log mu_x(1) = gamma + log log x + sum_{p<x} log(1 - 1/p)."""
    pr = _primes_below(x).astype(float)
    return EULER_GAMMA + math.log(math.log(x)) + math.fsum(np.log1p(-1.0 / pr))


def mu_x(z, x, cutoff=10**6):
    """mu_x(z) from the definition form; returns (value, error bound)."""
    z = float(z)
    x = float(x)
    if not 0 < z <= 2:
        raise DomainError("mu_x needs 0 < z <= 2")
    if x < 2 or (z == 2 and x <= 2):
        raise DomainError("mu_x needs x >= 2 (x > 2 when z = 2)")
    start = int(math.ceil(x))
    c = max(int(cutoff), start)
    tail, rel = euler_constant_product(z, start, c)
    v = math.exp(z * _log_mu1(x)) * tail
    return v, v * (rel + 1e-14)


def mu_x_product_form(z, x, cutoff=10**6):
    """mu_x(z) = e^(gamma z) C_z (log x)^z prod_{p<x} (1 - z/p); returns (value, error bound)."""
    cz, cz_err = c_z_const(z, cutoff)
    ep = euler_product(z, x)
    v = math.exp(EULER_GAMMA * z + z * math.log(math.log(x)) + ep.log_value) * cz
    return v, v * (cz_err / cz + ep.err + 1e-14)


def _tail_log_bracket(z, cutoff, mode):
    """Bracket for log prod_{p >= y} (1 - z/p)^-1 (1 - 1/p)^z, uniform over y > cutoff."""
    if mode == "published":
        if z <= 1:
            return z * math.log(PUBLISHED_LOWER_TAIL), 0.0
        return 0.0, math.log(PUBLISHED_UPPER_TAIL)
    if mode != "computed":
        raise InvalidArgument(f"unknown bracket mode {mode!r}")
    lt, err = _exact_tail(z, cutoff)
    # every term in the log expansion has the sign of z - 1, so partial tails lie between 0 and the full tail
    if z <= 1:
        return lt - err, 0.0
    return 0.0, lt + err


@lru_cache(maxsize=4096)
def _exact_tail(z, cutoff):
    return _euler_tail_log(z, cutoff)


def _mu1_bracket(p):
    """Bracket for mu_p(1), valid for p >= 300."""
    d = 1.0 / (2 * math.log(p) ** 2)
    return 1.0 - d, 1.0 + min(MU1_UPPER_CAP, d)


@lru_cache(maxsize=4)
def _prime_data(cutoff):
    sv = shared_sieve(max(cutoff, 1000))
    pr = sv.primes
    pr = pr[pr <= cutoff]
    allp = pr.astype(float)
    logs = np.log1p(-1.0 / allp)
    # log mu_p(1) for every prime p <= cutoff (sum over primes strictly below p)
    csum = np.concatenate([[0.0], np.cumsum(logs)[:-1]])
    log_mu1 = EULER_GAMMA + np.log(np.log(allp)) + csum
    nxt = int(sv.primes[np.searchsorted(sv.primes, cutoff, side="right")])
    return allp, log_mu1, nxt


@lru_cache(maxsize=8192)
def bundle_table(z, cutoff=BRACKET_CUTOFF, mode="computed"):
    """Brackets for mu_p(z), m_p(z), M_p(z), r_p(z) at every odd prime p <= cutoff.

    Returns a dict of arrays indexed like ``primes``, plus the uniform brackets at
    the first prime beyond the cutoff.
    """
    z = float(z)
    if not 0 < z <= 2:
        raise DomainError("z must lie in (0, 2]")
    if cutoff < 300:
        raise InvalidArgument("the mu_p(1) bracket is only valid from 300 on; cutoff must be >= 300")
    if mode == "published" and cutoff != 300:
        raise InvalidArgument("the fixed tail constants are tied to cutoff 300")
    allp, log_mu1, nxt = _prime_data(cutoff)
    odd = allp >= 3
    p = allp[odd]
    factor = -np.log1p(-z / p) + z * np.log1p(-1.0 / p)
    suffix = np.cumsum(factor[::-1])[::-1]
    tlo, thi = _tail_log_bracket(z, cutoff, mode)
    core = z * log_mu1[odd] + suffix
    mu = np.exp(core + 0.5 * (tlo + thi))
    mu_lo = np.exp(core + tlo) * (1 - SLACK)
    mu_hi = np.exp(core + thi) * (1 + SLACK)
    b_lo, b_hi = _mu1_bracket(nxt)
    uni_lo = math.exp(z * math.log(b_lo) + tlo) * (1 - SLACK)
    uni_hi = math.exp(z * math.log(b_hi) + thi) * (1 + SLACK)
    # suffix extrema over p' >= p, including everything past the cutoff
    m_lo = np.minimum(np.minimum.accumulate(mu_lo[::-1])[::-1], uni_lo)
    M_hi = np.maximum(np.maximum.accumulate(mu_hi[::-1])[::-1], uni_hi)
    ratio = M_hi / mu_lo
    r_hi = np.maximum(np.maximum.accumulate(ratio[::-1])[::-1], uni_hi / uni_lo)
    return {
        "primes": p.astype(np.int64), "mu": mu, "mu_lower": mu_lo, "mu_upper": mu_hi,
        "m_lower": m_lo, "M_upper": M_hi, "r_upper": r_hi,
        "next_prime": nxt, "uniform": (uni_lo, uni_hi), "tail_log": (tlo, thi),
    }


def uniform_bracket(q, z, cutoff=BRACKET_CUTOFF, mode="computed"):
    """(lower, upper) bracket for mu_p(z) valid for all primes p >= q > cutoff."""
    tlo, thi = _tail_log_bracket(float(z), cutoff, mode)
    b_lo, b_hi = _mu1_bracket(q)
    return (math.exp(z * math.log(b_lo) + tlo) * (1 - SLACK),
            math.exp(z * math.log(b_hi) + thi) * (1 + SLACK))


def mertens_bundle(q, z, cutoff=BRACKET_CUTOFF, mode="computed"):
    q = int(q)
    z = float(z)
    if q == 2:
        raise InvalidArgument("q = 2 is not supported; certification targets odd primes")
    if not 0 < z <= 2:
        raise DomainError("z must lie in (0, 2]")
    sv = shared_sieve(max(q, 1000))
    if not sv.is_prime(q):
        raise InvalidArgument(f"{q} is not prime")
    if q <= cutoff:
        tab = bundle_table(z, cutoff, mode)
        i = int(np.searchsorted(tab["primes"], q))
        return MertensBundle(q, z, float(tab["mu"][i]), float(tab["m_lower"][i]),
                             float(tab["M_upper"][i]), float(tab["r_upper"][i]),
                             float(tab["mu_lower"][i]), float(tab["mu_upper"][i]), mode)
    lo, hi = uniform_bracket(q, z, cutoff, mode)
    mu, err = mu_x(z, q)
    mu_lo = max(lo, (mu - err) * (1 - SLACK))
    mu_hi = min(hi, (mu + err) * (1 + SLACK))
    return MertensBundle(q, z, mu, lo, hi, hi / lo, mu_lo, mu_hi, mode)


@dataclass
class CheckReport:
    name: str
    rows: list
    failures: list
    checked: int
    skipped: list

    @property
    def passed(self):
        return not self.failures


def mertens3_check(x_grid=None, x_max=None):
    """prod_{p<=x} (1 - 1/p)^-1 <= e^gamma log x (1 + 2/log^2 x) for x >= 286.

    Either an explicit ``x_grid`` or every integer 286 <= x <= x_max.
    """
    if x_grid is None:
        if x_max is None:
            raise InvalidArgument("give x_grid or x_max")
        xs = np.arange(286, int(x_max) + 1, dtype=np.int64)
        skipped = []
    else:
        xs_all = np.asarray(sorted(x_grid), dtype=float)
        skipped = [float(x) for x in xs_all if x < 286]
        xs = xs_all[xs_all >= 286]
    if xs.size == 0:
        return CheckReport("mertens3", [], [], 0, skipped)
    top = int(math.floor(xs.max()))
    sv = shared_sieve(max(top, 1000))
    pr = sv.primes[sv.primes <= top]
    logs = np.cumsum(-np.log1p(-1.0 / pr.astype(float)))
    idx = np.searchsorted(pr, np.floor(xs), side="right") - 1
    lhs = np.exp(logs[idx])
    lx = np.log(xs.astype(float))
    rhs = math.exp(EULER_GAMMA) * lx * (1 + 2 / lx**2)
    bad = np.flatnonzero(lhs > rhs)
    rows = [(float(xs[i]), float(lhs[i]), float(rhs[i])) for i in
            ([int(np.argmax(lhs / rhs))] if x_grid is None else range(xs.size))]
    return CheckReport("mertens3", rows, [(float(xs[i]), float(lhs[i]), float(rhs[i])) for i in bad],
                       int(xs.size), skipped)


def two_product_check(N_grid=None, N_max=None):
    """prod_{2<p<=N} (1 - 2/p)^-1 <= 2.486 (log N)^2."""
    if N_grid is None:
        if N_max is None:
            raise InvalidArgument("give N_grid or N_max")
        Ns = np.arange(2, int(N_max) + 1, dtype=np.int64)
    else:
        Ns = np.asarray(sorted(int(n) for n in N_grid), dtype=np.int64)
        if Ns.size and Ns[0] < 2:
            raise InvalidArgument("N must be at least 2")
    if Ns.size == 0:
        return CheckReport("two-product", [], [], 0, [])
    top = int(Ns.max())
    sv = shared_sieve(max(top, 1000))
    pr = sv.primes[(sv.primes <= top) & (sv.primes > 2)]
    logs = np.concatenate([[0.0], np.cumsum(-np.log1p(-2.0 / pr.astype(float)))])
    idx = np.searchsorted(pr, Ns, side="right")
    lhs = np.exp(logs[idx])
    rhs = 2.486 * np.log(Ns.astype(float)) ** 2
    bad = np.flatnonzero(lhs > rhs)
    pick = [int(np.argmax(lhs / rhs))] if N_grid is None else range(Ns.size)
    rows = [(int(Ns[i]), float(lhs[i]), float(rhs[i])) for i in pick]
    return CheckReport("two-product", rows, [(int(Ns[i]), float(lhs[i]), float(rhs[i])) for i in bad],
                       int(Ns.size), [])
