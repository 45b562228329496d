"""Real zeta, prime zeta, layer Dirichlet series and the layer sums gamma_k(z).

gamma_k(z) is the Erdős sum of the layer {n : Omega(n) = k}. It is computed
from the Dirichlet series P_k(s) = sum_{Omega(n)=k} n^-s through

    gamma_k(z) = z^k / Gamma(z) * int_1^inf P_k(s) (s - 1)^(z-1) ds,

with P(s) = sum_m mu(m)/m log zeta(ms) and the Newton-type recursion
P_k = (1/k) sum_j P(js) P_{k-j}. On (1, 2] the substitution s = 1 + e^-t turns
the endpoint weight into e^(-zt); log zeta(1 + e^-t) is evaluated as
t + log1p(e^-t R) with R = zeta(1+eps) - 1/eps, so no precision is lost when
s - 1 underflows.
"""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import Literal

import numpy as np

from .errors import ConvergenceError, DomainError, InvalidArgument
from .quadrature import adaptive_gauss

EULER_GAMMA = 0.57721566490153286061
_EPS = np.finfo(float).eps

# Euler-Maclaurin: B_2j / (2j)!
_BERNOULLI = [1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6, -3617 / 510, 43867 / 798]
_EM_COEF = [b / math.factorial(2 * j) for j, b in enumerate(_BERNOULLI, start=1)]
_EM_N = 10
_EM_TERMS = 7

_SMALL_PRIMES = np.array([p for p in range(2, 128) if all(p % d for d in range(2, int(p**0.5) + 1))],
                         dtype=float)
_LOG_SMALL_PRIMES = np.log(_SMALL_PRIMES)
# above this argument P(x) is summed directly over primes < 128
_DIRECT_CUTOVER = 10.0


@dataclass(frozen=True)
class SeriesTolerance:
    abs_tol: float = 1e-16
    max_terms: int = 200
    prime_cutoff: int = 10**6

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise InvalidArgument("abs_tol must be positive")
        if self.prime_cutoff < 2:
            raise InvalidArgument("prime_cutoff must be at least 2")
        if self.max_terms < 1:
            raise InvalidArgument("max_terms must be positive")


@dataclass(frozen=True)
class QuadratureConfig:
    scheme: Literal["substituted-exp", "graded-mesh"] = "substituted-exp"
    panels: int = 8
    split_point: float = 2.0
    tail_tol: float = 1e-15

    def __post_init__(self):
        if self.panels < 1:
            raise InvalidArgument("panels must be >= 1")
        if not self.split_point > 1:
            raise InvalidArgument("split_point must exceed 1")
        if self.scheme not in ("substituted-exp", "graded-mesh"):
            raise InvalidArgument(f"unknown quadrature scheme {self.scheme!r}")


@dataclass
class GammaKResult:
    k: int
    z: float
    value: float
    est_error: float
    method: str
    rigorous_tail: bool = True

    def digest_fields(self):
        return asdict(self)


def config_digest(*configs):
    blob = json.dumps([asdict(c) for c in configs], sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


# ---------------------------------------------------------------------------
# zeta and Gamma


def _pochhammer_terms(s, N):
    """Euler-Maclaurin correction sum and the first omitted term, for zeta(s) with cutoff N."""
    total = np.zeros_like(s)
    poch = np.array(s, dtype=float, copy=True)  # s (s+1) ... (s + 2j - 2)
    npow = N ** (-s - 1.0)
    for j in range(_EM_TERMS):
        total += _EM_COEF[j] * poch * npow
        poch = poch * (s + 2 * j + 1) * (s + 2 * j + 2)
        npow = npow / (N * N)
    omitted = np.abs(_EM_COEF[_EM_TERMS] * poch * npow)
    return total, omitted


def _zeta_minus_one(s):
    """zeta(s) - 1 and its Euler-Maclaurin error bound, elementwise for s > 1."""
    s = np.asarray(s, dtype=float)
    N = float(_EM_N)
    head = np.zeros_like(s)
    rnd = np.zeros_like(s)
    for n in range(2, _EM_N):
        term = np.exp(-s * math.log(n))
        head += term
        # exp(-s log n) turns the rounding of log n into a relative error ~ s log n eps
        rnd += term * (s * math.log(n) + 2.0)
    corr, omitted = _pochhammer_terms(s, N)
    tail = N ** (1.0 - s) / (s - 1.0) + 0.5 * N ** (-s)
    val = head + tail + corr
    rnd = _EPS * (rnd + (tail + np.abs(corr)) * (s * math.log(N) + 4.0) + 8.0 * np.abs(val))
    return val, omitted + rnd


def _zeta_regular_part(eps):
    """R(eps) = zeta(1 + eps) - 1/eps, stable for eps >= 0 (R(0) = Euler's gamma)."""
    eps = np.asarray(eps, dtype=float)
    s = 1.0 + eps
    N = float(_EM_N)
    logN = math.log(N)
    head = np.zeros_like(eps)
    rnd = np.zeros_like(eps)
    for n in range(1, _EM_N):
        term = np.exp(-s * math.log(n))
        head += term
        rnd += term * (s * math.log(n) + 2.0)
    x = -eps * logN
    small = np.abs(x) < 1e-8
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(small, -logN * (1.0 + 0.5 * x), np.expm1(x) / np.where(small, 1.0, eps))
    corr, omitted = _pochhammer_terms(s, N)
    val = head + ratio + 0.5 * N ** (-s) + corr
    rnd = _EPS * (rnd + (np.abs(ratio) + 1.0) * (s * logN + 4.0) + 8.0 * np.abs(val))
    return val, omitted + rnd


def zeta_real(s):
    """Riemann zeta for real s > 1."""
    s = float(s)
    if not s > 1:
        raise DomainError("zeta_real needs s > 1")
    if s - 1 < 0.25:
        r, _ = _zeta_regular_part(np.array([s - 1.0]))
        return float(1.0 / (s - 1.0) + r[0])
    v, _ = _zeta_minus_one(np.array([s]))
    return float(1.0 + v[0])


def gamma_fn(z):
    """Gamma(z) for z > 0 (the C library's tgamma, ~1 ulp on this range)."""
    z = float(z)
    if not z > 0:
        raise DomainError("gamma_fn needs z > 0")
    return math.gamma(z)


def _log_zeta(x):
    """log zeta(x) for an array of x > 1 (moderately away from 1)."""
    v, err = _zeta_minus_one(x)
    lz = np.log1p(v)
    return lz, err / (1.0 + v) + _EPS * np.abs(lz)


def _log_zeta_near_one(t):
    """log zeta(1 + e^-t), for an array of t >= 0."""
    eps = np.exp(-t)
    r, err = _zeta_regular_part(eps)
    lz = t + np.log1p(eps * r)
    return lz, eps * err + 2 * _EPS * np.abs(lz)


# ---------------------------------------------------------------------------
# prime zeta and P_k


@lru_cache(maxsize=None)
def _mobius_table(n):
    mu = np.ones(n + 1, dtype=int)
    mu[0] = 0
    is_comp = np.zeros(n + 1, dtype=bool)
    for p in range(2, n + 1):
        if not is_comp[p]:
            is_comp[2 * p :: p] = True
            mu[p::p] *= -1
            mu[p * p :: p * p] = 0
    return mu


def _prime_zeta_direct(x):
    """Sum over p < 128 and its rounding error (log p rounding is amplified by x)."""
    terms = np.exp(-np.multiply.outer(x, _LOG_SMALL_PRIMES))
    total = terms.sum(axis=-1)
    amp = np.multiply.outer(x, _LOG_SMALL_PRIMES) + 2.0
    rnd = _EPS * ((terms * amp).sum(axis=-1) + _SMALL_PRIMES.size * total)
    return total, rnd


def _prime_zeta_array(x, t=None, abs_tol=1e-16, max_terms=200):
    """P(x) elementwise plus an absolute error bound.

    When ``t`` is given, ``x = 1 + e^-t`` and log zeta(x) uses the near-one form.
    """
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    err = np.zeros_like(x)
    direct = x >= _DIRECT_CUTOVER
    if direct.any():
        xd = x[direct]
        out[direct], rnd = _prime_zeta_direct(xd)
        # sum over p >= 131 of p^-x  <=  131^(1-x) / (x-1) + 131^-x
        err[direct] = np.exp((1 - xd) * math.log(131.0)) / (xd - 1) + np.exp(-xd * math.log(131.0)) + rnd
    rest = ~direct
    if rest.any():
        xr = x[rest]
        # per point: stop once the tail 4 * 2^-((M+1) x) is below abs_tol/2 times the leading 2^-x,
        # so a value never depends on which batch it was evaluated in
        need = np.ceil((math.log2(8.0 / abs_tol) + xr) / xr) - 1
        short = need > max_terms
        need = np.minimum(need, max_terms)
        M = int(need.max())
        mu = _mobius_table(M)
        acc = np.zeros_like(xr)
        acc_err = 4.0 * np.exp2(-(need + 1) * xr)
        for m in range(1, M + 1):
            if mu[m] == 0:
                continue
            live = need >= m
            if m == 1 and t is not None:
                lz, le = _log_zeta_near_one(np.asarray(t, dtype=float)[rest])
            else:
                lz, le = _log_zeta(m * xr)
            acc += np.where(live, (mu[m] / m) * lz, 0.0)
            acc_err += np.where(live, le / m + 2 * _EPS * np.abs(lz) / m, 0.0)
        out[rest] = acc
        err[rest] = acc_err
        if short.any():
            raise ConvergenceError(
                f"prime zeta series needs more than {max_terms} terms at s={float(xr[short].min())}",
                partial=out if out.ndim else float(out), error=err if err.ndim else float(err))
    return out, err


def prime_zeta(s, tol=None):
    """P(s) = sum over primes of p^-s, for real s > 1."""
    return prime_zeta_with_error(s, tol)[0]


def prime_zeta_with_error(s, tol=None):
    tol = tol or SeriesTolerance()
    s = float(s)
    if not s > 1:
        raise DomainError("prime_zeta needs s > 1")
    t = None
    if s - 1 < 0.25:
        t = np.array([-math.log(s - 1)])
    v, e = _prime_zeta_array(np.array([s]), t, tol.abs_tol, tol.max_terms)
    return float(v[0]), float(e[0])


def _pk_table(s, kmax, t=None, tol=None):
    """Rows P_0(s), ..., P_kmax(s) for an array s, plus a relative error bound per row."""
    tol = tol or SeriesTolerance()
    s = np.asarray(s, dtype=float)
    pj = []
    rel = 0.0
    for j in range(1, kmax + 1):
        v, e = _prime_zeta_array(j * s, t if j == 1 else None, tol.abs_tol, tol.max_terms)
        pj.append(v)
        with np.errstate(divide="ignore", invalid="ignore"):
            r = np.where(v > 0, e / v, 0.0)
        rel = max(rel, float(r.max()) if r.size else 0.0)
    rows = [np.ones_like(s)]
    for k in range(1, kmax + 1):
        acc = np.zeros_like(s)
        for j in range(1, k + 1):
            acc += pj[j - 1] * rows[k - j]
        rows.append(acc / k)
    rel_rows = [k * (rel + 4 * _EPS) for k in range(kmax + 1)]
    return np.array(rows), rel_rows


def pk_dirichlet(s, k, tol=None):
    """P_k(s) = sum_{Omega(n) = k} n^-s."""
    return pk_dirichlet_with_error(s, k, tol)[0]


def pk_dirichlet_with_error(s, k, tol=None):
    s = float(s)
    if not s > 1:
        raise DomainError("pk_dirichlet needs s > 1")
    if k < 0:
        raise InvalidArgument("k must be nonnegative")
    if k == 0:
        return 1.0, 0.0
    t = np.array([-math.log(s - 1)]) if s - 1 < 0.25 else None
    rows, rel = _pk_table(np.array([s]), k, t, tol)
    v = float(rows[k][0])
    return v, v * rel[k]


# ---------------------------------------------------------------------------
# gamma_k(z) by quadrature


@lru_cache(maxsize=None)
def _prime_zeta_integers(mmax=80):
    vals, _ = _prime_zeta_array(np.arange(2, mmax + 1, dtype=float))
    return vals


def _pk_envelope_log(w):
    """c(w) with P_k(1 + e^-t) <= w^-k exp(w t + w e^-t + c(w)) for 0 < w < 2."""
    pm = _prime_zeta_integers()
    m = np.arange(2, 2 + pm.size)
    terms = w**m * pm / m
    # remaining m > 81: P(m) <= 2 * 2^-m
    rest = 2 * (w / 2) ** 82 / (1 - w / 2) / 82
    return float(terms.sum() + rest)


def _t_tail_bound(k, z, T):
    """Upper bound on int_T^inf P_k(1 + e^-t) e^(-zt) dt."""
    best = math.inf
    wmax = min(z, 1.99)
    for frac in np.linspace(0.02, 0.98, 49):
        w = frac * wmax
        if w >= z:
            continue
        logb = -k * math.log(w) + w * math.exp(-T) + _pk_envelope_log(w) - (z - w) * T - math.log(z - w)
        best = min(best, logb)
    return math.exp(best) if best < 700 else math.inf


def _s_tail_bound(pk_S, k, z, S):
    """Upper bound on int_S^inf P_k(s) (s-1)^(z-1) ds, using P_k(s) <= 2^(-k(s-S)) P_k(S)."""
    rate = k * math.log(2.0) - max(0.0, (z - 1) / (S - 1))
    return pk_S * (S - 1) ** (z - 1) / rate


def gamma_k(k, z, quad=None, tol=None):
    """gamma_k(z) = f_z(P_k) by quadrature, with an error estimate."""
    quad = quad or QuadratureConfig()
    tol = tol or SeriesTolerance()
    if k < 1:
        raise InvalidArgument("k must be >= 1")
    z = float(z)
    if not 0 < z <= 2:
        raise DomainError("gamma_k is finite only for 0 < z <= 2")
    t_split = -math.log(quad.split_point - 1.0)

    def g_t(t):
        s = 1.0 + np.exp(-t)
        rows, _ = _pk_table(s, k, t, tol)
        return rows[k] * np.exp(-z * t)

    def g_s(s):
        rows, _ = _pk_table(s, k, None, tol)
        return rows[k] * np.exp((z - 1.0) * np.log(s - 1.0))

    prefactor = math.exp(k * math.log(z) - math.lgamma(z))
    # t-range: [t_split, T] with the mass concentrated near t = k / z
    peak = k / z
    T = max(t_split + 8.0, 2 * peak + 40.0 / z)
    while _t_tail_bound(k, z, T) * prefactor > quad.tail_tol:
        T *= 1.5
        if T > 1e7:
            raise ConvergenceError("could not bound the t-tail of the gamma_k integral")
    t_tail = _t_tail_bound(k, z, T)

    if quad.scheme == "substituted-exp":
        width = math.sqrt(k) / z + 1.0
        bps = [b for b in (peak - 3 * width, peak, peak + 3 * width, peak + 8 * width) if t_split < b < T]
        try:
            v_t, e_t, _ = adaptive_gauss(g_t, t_split, T, abs_tol=1e-300, rel_tol=1e-14,
                                         initial_panels=quad.panels, breakpoints=bps)
        except ConvergenceError as exc:
            raise ConvergenceError(
                f"gamma_k quadrature failed for k={k}, z={z}",
                partial=prefactor * (exc.partial or 0.0), error=exc.error,
            ) from exc
    else:
        v_t, e_t = _graded_mesh(k, z, tol, prefactor, quad.split_point)
        t_tail = 0.0

    S = quad.split_point + 64.0 / k
    # P(js) switches evaluation method at js = 10
    cuts = [_DIRECT_CUTOVER / j for j in range(1, k + 1)]
    v_s, e_s, _ = adaptive_gauss(g_s, quad.split_point, S, abs_tol=1e-300, rel_tol=1e-14,
                                 initial_panels=quad.panels, breakpoints=cuts)
    pk_S, _ = pk_dirichlet_with_error(S, k, tol)
    s_tail = _s_tail_bound(pk_S, k, z, S)

    integral = v_t + v_s
    value = prefactor * integral
    rel_series = k * 1e-15
    err = prefactor * (e_t + e_s + t_tail + s_tail) + abs(value) * (rel_series + 32 * _EPS)
    return GammaKResult(k, z, value, err, "quadrature")


def _graded_mesh(k, z, tol, prefactor, split_point):
    """Integrate over s in (1, split] directly on a geometrically graded mesh.

    Panels [1 + r^(j+1)(split-1), 1 + r^j (split-1)]; on each panel the weight
    (s-1)^(z-1) is smooth. The innermost panel [1, 1 + delta] is bounded via
    P_k(s) <= w^-k F(s, w), as for the substituted scheme.
    """
    t_max = 1.0
    while _t_tail_bound(k, z, t_max) * prefactor > 1e-15:
        t_max *= 1.5
    delta = math.exp(-t_max)
    ratio = 0.5
    edges = [split_point - 1.0]
    while edges[-1] > delta:
        edges.append(edges[-1] * ratio)
    xs, ws = np.polynomial.legendre.leggauss(30)
    xs2, ws2 = np.polynomial.legendre.leggauss(15)
    lo = np.array(edges[1:])
    hi = np.array(edges[:-1])
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)

    def panel_sum(nodes, weights):
        u = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
        t = -np.log(u)
        rows, _ = _pk_table(1.0 + u, k, t, tol)
        f = rows[k] * np.exp((z - 1.0) * np.log(u))
        return (half[:, None] * f.reshape(lo.size, -1) * weights[None, :]).sum(axis=1)

    big = panel_sum(xs, ws)
    small = panel_sum(xs2, ws2)
    tail = _t_tail_bound(k, z, -math.log(lo[-1]))
    return float(big.sum()), float(np.abs(big - small).sum() + tail)


# ---------------------------------------------------------------------------
# direct summation oracle


@dataclass
class DirectSum:
    partial: float
    tail_bound: float
    rigorous: bool
    empty: bool


def _layer_terms(sieve, k, z, lo, hi):
    om = sieve.big_omega
    n = np.flatnonzero(om[lo + 1 : hi + 1] == k) + lo + 1
    n = n[n >= 2].astype(float)
    if n.size == 0:
        return 0.0
    return float(np.sum(np.exp(k * math.log(z) - np.log(n) - z * np.log(np.log(n)))))


def direct_sum_oracle(sieve, k, z, cutoff):
    """Brute-force sum of f_z over {n <= cutoff : Omega(n) = k} with a tail figure.

    For z > 1 the tail bound z^k (log X)^(1-z) / (z-1) is rigorous. For z <= 1 no
    effective bound is available; the tail is extrapolated geometrically from the
    two log-scale blocks (X^1/4, X^1/2] and (X^1/2, X], doubled, and flagged
    non-rigorous (infinite when the blocks are not yet decaying).
    """
    cutoff = int(cutoff)
    if cutoff > sieve.limit:
        raise InvalidArgument(f"cutoff {cutoff} exceeds sieve limit {sieve.limit}")
    if not 0 < z < 2:
        raise DomainError("direct_sum_oracle needs 0 < z < 2")
    partial = _layer_terms(sieve, k, z, 1, cutoff)
    empty = partial == 0.0
    if z > 1:
        tail = math.exp(k * math.log(z)) * math.log(cutoff) ** (1 - z) / (z - 1)
        return DirectSum(partial, tail, True, empty)
    x2 = int(math.isqrt(cutoff))
    x4 = int(math.isqrt(x2))
    d1 = _layer_terms(sieve, k, z, x4, x2)
    d2 = _layer_terms(sieve, k, z, x2, cutoff)
    if d1 > 0 and d2 < d1:
        rho = d2 / d1
        tail = 2.0 * d2 * rho / (1 - rho)
    else:
        tail = math.inf
    return DirectSum(partial, tail, False, empty)


# ---------------------------------------------------------------------------
# Euler-product constants


def _euler_tail_log(w, cutoff):
    """sum_{p > cutoff} [-log(1 - w/p) + w log(1 - 1/p)] and an absolute error bound."""
    from .arith import shared_sieve

    sv = shared_sieve(max(cutoff, 200))
    pr = sv.primes[sv.primes <= cutoff].astype(float)
    W = max(1.0, abs(w))
    total = 0.0
    err = 0.0
    pm = _prime_zeta_integers()
    c = float(cutoff)
    for m in range(2, 200):
        coef = (w**m - w) / m
        bound_m = c ** (1 - m) / (m - 1)
        if abs(coef) * bound_m < 1e-22 and m > 3:
            # geometric remainder: ratio W / c per step
            err += abs(coef) * bound_m * 2 * c / (c - W) if c > 2 * W else math.inf
            break
        if m - 2 < pm.size and 8 * _EPS * pm[m - 2] < bound_m / 2:
            part = math.fsum(np.exp(-m * np.log(pr)))
            tm = pm[m - 2] - part
            tm_err = 8 * _EPS * pm[m - 2]
            if tm < 0:
                tm, tm_err = 0.0, bound_m
        else:
            tm, tm_err = bound_m / 2, bound_m / 2
        total += coef * tm
        err += abs(coef) * tm_err
    return total, err


@lru_cache(maxsize=256)
def _euler_log_sum(w, start, cutoff):
    from .arith import shared_sieve

    sv = shared_sieve(max(cutoff, 200))
    pr = sv.primes
    pr = pr[(pr >= start) & (pr <= cutoff)].astype(float)
    terms = -np.log1p(-w / pr) + w * np.log1p(-1.0 / pr)
    head = math.fsum(terms)
    tail, tail_err = _euler_tail_log(w, cutoff)
    return head + tail, tail_err + 4 * _EPS * float(np.abs(terms).sum())


def euler_constant_product(w, start, cutoff):
    """prod_{p >= start} (1 - w/p)^-1 (1 - 1/p)^w with a relative error bound."""
    lv, le = _euler_log_sum(float(w), int(start), int(cutoff))
    return math.exp(lv), math.expm1(le + 4 * _EPS)


def big_G(z, tol=None):
    return big_G_with_error(z, tol)[0]


def big_G_with_error(z, tol=None):
    tol = tol or SeriesTolerance()
    z = float(z)
    if not 0 < z < 2:
        raise DomainError("G(z) is defined here for 0 < z < 2 (pole at z = 2)")
    cz, rel = euler_constant_product(z, 2, tol.prime_cutoff)
    v = cz / math.gamma(1 + z)
    return v, v * (rel + 4 * _EPS)


def d_w_const(w, tol=None):
    return d_w_const_with_error(w, tol)[0]


def d_w_const_with_error(w, tol=None):
    tol = tol or SeriesTolerance()
    w = float(w)
    if not 0 <= w < 3:
        raise DomainError("d_w needs 0 <= w < 3")
    prod, rel = euler_constant_product(w, 3, tol.prime_cutoff)
    v = 2.0**-w * prod
    return v, v * rel


def _odd_prime_log_sum(z, cutoff):
    """sum_{p > 2} z log p / ((p-1)(p-z-1)) truncated at cutoff, plus a z / cutoff tail estimate."""
    from .arith import shared_sieve

    sv = shared_sieve(max(cutoff, 200))
    pr = sv.primes
    pr = pr[(pr > 2) & (pr <= cutoff)].astype(float)
    return math.fsum(z * np.log(pr) / ((pr - 1) * (pr - z - 1))) + z / cutoff


def gamma_k_asymptotic(k, z, variant, tol=None):
    """Main terms of the large-k expansion of gamma_k(z), O-terms dropped."""
    tol = tol or SeriesTolerance()
    z = float(z)
    if variant == "sub1":
        if not 0 < z < 1:
            raise InvalidArgument("sub1 branch needs 0 < z < 1")
        corr = (EULER_GAMMA - z * math.log(2) / (1 - z) - _odd_prime_log_sum(z, tol.prime_cutoff))
        lead = 2 * d_w_const(z + 1, tol) / (math.gamma(z) * (1 - z))
        return big_G(z, tol) + (z / (z + 1)) ** k * lead * corr
    if variant == "eq1":
        if z != 1:
            raise InvalidArgument("eq1 branch needs z = 1")
        d2 = d_w_const(2.0, tol)
        return 1 - 2.0**-k * d2 / 4 * math.log(2) * (k * k - 4 * k * math.log(k))
    if variant == "super1":
        if not 1 < z < 2:
            raise InvalidArgument("super1 branch needs 1 < z < 2")
        return big_G(z, tol)
    if variant == "eq2":
        if z != 2:
            raise InvalidArgument("eq2 branch needs z = 2")
        return d_w_const(2.0, tol) / 2 * (k - 2 * math.log(k))
    if variant == "uniform":
        if not 0 < z < 2:
            raise InvalidArgument("uniform branch needs 0 < z < 2")
        return big_G(z, tol)
    raise InvalidArgument(f"unknown variant {variant!r}")
