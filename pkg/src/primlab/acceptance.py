"""The acceptance battery, shared by ``primlab suite`` and the test-suite.

Each criterion returns a :class:`Criterion` with a verdict and the numbers
behind it. Levels scale the workload: ``smoke`` runs reduced grids on a small
sieve, ``desk`` the full grids, ``extended`` additionally pushes sizes up.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import arith, density, mertens, primsets, special, strongprime

LEVELS = ("smoke", "desk", "extended")
SIEVE_FOR_LEVEL = {"smoke": 10**4, "desk": 10**6, "extended": 10**7}

# D_2(N) log N at N = 1e2, 1e3, 1e4 on first run: 1.29745, 1.50064, 1.61473
D2_BAND = (1.25, 1.70)


@dataclass
class Criterion:
    number: int
    title: str
    passed: bool
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self):
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] criterion {self.number}: {self.title} ({self.seconds:.1f}s)"


def _timed(fn):
    def wrapper(level, sieve, workers=1):
        t0 = time.perf_counter()
        out = fn(level, sieve, workers)
        out.seconds = time.perf_counter() - t0
        return out

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@_timed
def strong_primes(level, sieve, workers=1):
    """Odd primes are Erdős z-strong on [0.44, 2] (q <= 300 plus the uniform tail)."""
    if level == "smoke":
        lo, hi, q_max, budget = 0.9, 1.1, 50, 60.0
    else:
        lo, hi, q_max, budget = 0.44, 2.0, 300, 600.0
    t0 = time.perf_counter()
    rep = strongprime.certify_strong(lo, hi, q_max, workers=workers)
    dt = time.perf_counter() - t0
    worst = max(max(iv.bound for iv in r.intervals) for r in rep.primes)
    bad = [r.q for r in rep.primes if r.verdict != "pass"]
    return Criterion(1, "strong-prime certification", rep.overall and dt <= budget, {
        "z_range": [lo, hi], "q_max": q_max, "overall": rep.overall, "non_passing": bad,
        "worst_interval_bound": worst, "tail": rep.tail_argument,
        "leaves": sum(len(r.intervals) for r in rep.primes), "runtime_s": dt, "budget_s": budget,
    })


@_timed
def erdos_inequality(level, sieve, workers=1):
    """Every antichain of [2, 12] satisfies the weighted inequality for f(p) = z/p."""
    hi = 12
    t0 = time.perf_counter()
    rec = list(primsets.enumerate_antichains(hi, sieve, range_lo=2))
    bits = primsets.antichains_bitmask(hi, range_lo=2)
    same = sorted(map(tuple, rec)) == sorted(map(tuple, bits))
    zs = (0.5, 1.0, 1.5, 1.99)
    worst = {}
    failures = []
    for z in zs:
        f = primsets.MultiplicativeWeight("z_over_p", z)
        top = -1.0
        for A in rec:
            lhs, ok = primsets.erdos_inequality_check(A, f, primsets.INCREASING, sieve)
            top = max(top, lhs)
            if not ok:
                failures.append((z, A, lhs))
        worst[z] = top
    dt = time.perf_counter() - t0
    passed = same and not failures and len(rec) == len(bits) and dt <= 60
    return Criterion(2, "Erdős inequality on all antichains of [2, 12]", passed, {
        "range": [2, hi], "count_recursive": len(rec), "count_bitmask": len(bits), "sets_agree": same,
        "max_lhs": worst, "failures": failures[:10], "runtime_s": dt,
    })


@_timed
def gamma6_minimal(level, sieve, workers=1):
    """gamma_k(1), k = 1..12, is minimal at k = 6; quadrature agrees with direct sums for k <= 8."""
    vals = {k: special.gamma_k(k, 1.0) for k in range(1, 13)}
    k_min = min(vals, key=lambda k: vals[k].value)
    cutoff = min(10**6, sieve.limit)
    agree = {}
    ok_all = True
    for k in range(1, 9):
        r = vals[k]
        o = special.direct_sum_oracle(sieve, k, 1.0, cutoff)
        within = abs(r.value - o.partial) <= r.est_error + o.tail_bound
        # the partial sum is a lower bound whatever the tail does
        below = o.partial <= r.value + r.est_error
        ok_all &= within and below
        agree[k] = {"quadrature": r.value, "est_error": r.est_error, "partial": o.partial,
                    "tail_bound": o.tail_bound, "tail_rigorous": o.rigorous, "agree": bool(within and below)}
    return Criterion(3, "gamma_6(1) minimal among k <= 12", k_min == 6 and ok_all, {
        "values": {k: v.value for k, v in vals.items()}, "argmin": k_min, "cutoff": cutoff,
        "direct_sum": agree,
    })


@_timed
def gamma_to_one(level, sieve, workers=1):
    """|gamma_k(1) - 1| decreases for k = 10..25; ratio to the main term in [0.5, 2] for k = 18..25."""
    d2 = special.d_w_const(2.0)
    gaps = {k: abs(special.gamma_k(k, 1.0).value - 1) for k in range(10, 26)}
    dec = all(gaps[k] > gaps[k + 1] for k in range(10, 25))
    ratios = {}
    for k in range(18, 26):
        main = 2.0**-k * d2 / 4 * math.log(2) * (k * k - 4 * k * math.log(k))
        ratios[k] = gaps[k] / main
    in_band = all(0.5 <= r <= 2 for r in ratios.values())
    return Criterion(4, "gamma_k(1) -> 1 with the predicted main term", dec and in_band, {
        "gaps": gaps, "decreasing": dec, "ratios": ratios, "d2": d2,
    })


@_timed
def closed_forms(level, sieve, workers=1):
    """I(1) = pi/4, I(2) = 1/2, G(1) = 1, C_1 = 1, telescoping of d_z over initial primes."""
    i1 = strongprime.i_of_z(1.0)
    i2 = strongprime.i_of_z(2.0)
    g1, g1_err = special.big_G_with_error(1.0)
    c1, c1_err = mertens.c_z_const(1.0)
    k_top = 10**4 if level != "smoke" else 10**3
    ks = sorted(set(list(range(1, 51)) + list(range(100, k_top + 1, 100)) + [k_top]))
    primes = sieve.primes
    if primes.size < k_top:
        primes = arith.shared_sieve(200000).primes
    worst = 0.0
    for z in (0.5, 1.0, 1.5):
        logs = np.log1p(-z / primes[:k_top].astype(float))
        for k in ks:
            lhs = primsets.dz_of_L(primes[:k].tolist(), z, primsets.INCREASING, arith.shared_sieve(int(primes[k - 1])))
            rhs = -math.expm1(math.fsum(logs[:k]))
            worst = max(worst, abs(lhs - rhs))
    checks = {
        "I(1)": abs(i1 - math.pi / 4) <= 1e-10,
        "I(2)": abs(i2 - 0.5) <= 1e-10,
        "G(1)": abs(g1 - 1) <= g1_err,
        "C_1": abs(c1 - 1) <= c1_err,
        "telescoping": worst <= 1e-14,
    }
    return Criterion(5, "closed-form special values", all(checks.values()), {
        "I(1)": i1, "I(2)": i2, "G(1)": g1, "G(1)_err": g1_err, "C_1": c1, "C_1_err": c1_err,
        "telescoping_max_dev": worst, "telescoping_k_max": k_top, "checks": checks,
    })


@_timed
def explicit_sweeps(level, sieve, workers=1):
    """N_k(x), the two-product bound, G(Z, A) and the Mertens bound, over full ranges."""
    x_max = 10**4 if level == "smoke" else 10**6
    z_max = 10**4 if level == "smoke" else 10**5
    sv = arith.shared_sieve(x_max)
    nk = arith.check_nk_bound(sv, 20, x_max)
    two = mertens.two_product_check(N_max=x_max)
    g = arith.divisor_bound_sweep(sv, z_max, list(range(0, 17)))
    m3 = mertens.mertens3_check(x_max=x_max)
    checks = {"N_k": nk.passed, "two_product": two.passed, "divisor": g.passed, "mertens3": m3.passed}
    return Criterion(6, "explicit-constant sweeps", all(checks.values()), {
        "checks": checks,
        "N_k": {"points": nk.checked, "failures": nk.failures[:10],
                "tightest": max(nk.rows, key=lambda r: r[2] / r[3])},
        "two_product": {"points": two.checked, "tightest": two.rows, "failures": two.failures[:10]},
        "divisor": {"points": g.checked, "tightest": max(g.rows, key=lambda r: r[2] / r[3]),
                    "failures": g.failures[:10]},
        "mertens3": {"points": m3.checked, "tightest": m3.rows, "failures": m3.failures[:10]},
    })


@_timed
def dz_exactness(level, sieve, workers=1):
    """Flow optimum equals brute force; D_1(4), D_1(6); the Sárközy-type lower bound."""
    mismatches = []
    cert_bad = []
    n_top = 12 if level == "smoke" else 20
    for N in range(1, n_top + 1):
        for z in (0.5, 1.0, 2.0, 3.0):
            p = density.DivisibilityPoset(N, z, sieve)
            b = density.max_weight_antichain(p, "brute")
            f = density.max_weight_antichain(p, "flow")
            if abs(b.weight - f.weight) > 1e-12 * max(1.0, b.weight):
                mismatches.append((N, z, b.weight, f.weight))
            if not f.certificate_ok:
                cert_bad.append((N, z))
    # exhaustive oracle for the two closed values
    exhaust = {}
    for N in (4, 6):
        best = max((sum((Fraction(1, a) for a in A), Fraction(0)) for A in primsets.enumerate_antichains(N, sieve)))
        exhaust[N] = best / density.denominator_sum(N, 1, sieve, exact=True)
    d4 = density.d_z_density(4, 1.0, sieve, method="flow", exact=True)[0]
    d6 = density.d_z_density(6, 1.0, sieve, method="flow", exact=True)[0]
    closed = (exhaust[4] == Fraction(12, 25) == d4) and (exhaust[6] == Fraction(62, 147) == d6)
    Ns = [4, 100] if level == "smoke" else [4, 100, 1000]
    sark = {z: density.sarkozy_bound_check(z, Ns, sieve) for z in (2.1, 3.0, 4.0)}
    sark_ok = all(r.passed for r in sark.values())
    passed = not mismatches and not cert_bad and closed and sark_ok
    return Criterion(7, "exact D_z by min-flow", passed, {
        "mismatches": mismatches, "certificate_failures": cert_bad,
        "D_1(4)": str(d4), "D_1(6)": str(d6), "exhaustive": {k: str(v) for k, v in exhaust.items()},
        "sarkozy": {z: [(r["N"], r["D"], r["bound"]) for r in rep.rows] for z, rep in sark.items()},
    })


@_timed
def d2_band(level, sieve, workers=1):
    """D_2(N) log N stays inside the band recorded on first run."""
    Ns = [100, 1000] if level == "smoke" else [100, 1000, 10**4]
    if level == "extended":
        Ns.append(10**5)
    vals = {}
    for N in Ns:
        d, sol, _ = density.d_z_density(N, 2.0, sieve)
        vals[N] = d * math.log(N)
    lo, hi = D2_BAND
    return Criterion(8, "D_2(N) log N bounded", all(lo <= v <= hi for v in vals.values()), {
        "values": vals, "band": D2_BAND,
    })


@_timed
def dz_layer_two(level, sieve, workers=1):
    """Truncated d_1(L_{P_2}) over P_2 in [1, 1e6] exceeds 0.9 and grows with the cutoff."""
    top = min(sieve.limit, 10**6 if level != "extended" else 10**7)
    cuts = [c for c in (10**3, 10**4, 10**5, 10**6, 10**7) if c <= top]
    om = sieve.big_omega
    vals = {}
    for c in cuts:
        layer = (np.flatnonzero(om[: c + 1] == 2)).tolist()
        vals[c] = primsets.dz_of_L(layer, 1.0, primsets.INCREASING, sieve)
    mono = all(vals[a] <= vals[b] for a, b in zip(cuts, cuts[1:]))
    at_1e6 = vals.get(10**6, vals[cuts[-1]])
    return Criterion(9, "d_1(L_{P_2}) truncated above 0.9", at_1e6 > 0.9 and mono, {
        "values": vals, "monotone": mono, "threshold": 0.9,
    })


CRITERIA = [strong_primes, erdos_inequality, gamma6_minimal, gamma_to_one, closed_forms,
            explicit_sweeps, dz_exactness, d2_band, dz_layer_two]


def run_battery(level="desk", only=None, sieve=None, workers=1):
    if level not in LEVELS:
        raise ValueError(f"unknown level {level!r}")
    sieve = sieve or arith.shared_sieve(SIEVE_FOR_LEVEL[level])
    out = []
    for i, fn in enumerate(CRITERIA, start=1):
        if only and i not in only:
            continue
        out.append(fn(level, sieve, workers))
    return out
