"""Certification that odd primes are Erdős z-strong on a z-range.

For a prime q the functional b_q(z) = I(z) r_q(z) mu_q(z) / m_q(z) with
I(z) = int_0^1 (1 + tau^(2/z))^-z dtau certifies q once b_q(z) < 1. Since
the right derivative of b_q is at most 3.54 b_q, an upper bound C at the left
end of an interval of width d extends to the whole interval as
C (1 + 3.54 d / (1 - 3.54 d)). The z-range is cut into pieces of width 0.01
which are bisected while their bound is >= 1.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np

from . import mertens
from .arith import shared_sieve
from .errors import DomainError, InvalidArgument
from .quadrature import adaptive_gauss

GROWTH = 3.54
MAX_WIDTH = 0.25
# certified bounds carry this relative outward slack on top of the tracked errors
SLACK = 1e-12


@lru_cache(maxsize=16384)
def i_of_z_with_error(z):
    z = float(z)
    if not 0 < z <= 2:
        raise DomainError("I(z) needs 0 < z <= 2")
    e = 2.0 / z

    def f(t):
        return np.exp(-z * np.log1p(t**e))

    v, err, _ = adaptive_gauss(f, 0.0, 1.0, abs_tol=1e-15, rel_tol=1e-15, initial_panels=2)
    return v, err + 4e-16


def i_of_z(z):
    return i_of_z_with_error(z)[0]


def _i_upper(z):
    v, err = i_of_z_with_error(z)
    return v + err


def b_q(q, z, bundle=None, mode="computed", cutoff=mertens.BRACKET_CUTOFF):
    """Certified upper bound on b_q(z)."""
    if bundle is None:
        bundle = mertens.mertens_bundle(q, z, cutoff, mode)
    if bundle.q != q or bundle.z != float(z):
        raise InvalidArgument("bundle was computed for a different (q, z)")
    if not (bundle.m_lower > 0 and math.isfinite(bundle.M_upper) and math.isfinite(bundle.r_upper)):
        raise InvalidArgument("degenerate Mertens bundle")
    return _i_upper(z) * bundle.r_upper * bundle.mu_upper / bundle.m_lower * (1 + SLACK)


def b_q_crude(q, z, bundle=None, mode="computed", cutoff=mertens.BRACKET_CUTOFF):
    """The coarser bound I(z) (M_q / m_q)^2."""
    if bundle is None:
        bundle = mertens.mertens_bundle(q, z, cutoff, mode)
    return _i_upper(z) * (bundle.M_upper / bundle.m_lower) ** 2 * (1 + SLACK)


def tail_functional(q_first, z, mode="computed", cutoff=mertens.BRACKET_CUTOFF):
    """Upper bound on b_q(z) valid simultaneously for every prime q >= q_first.

    r_q <= r_q', mu_q <= M_q' and m_q >= m_q' for q >= q', so
    I(z) r_q' M_q' / m_q' dominates every b_q with q >= q'.
    """
    bd = mertens.mertens_bundle(q_first, z, cutoff, mode)
    return _i_upper(z) * bd.r_upper * bd.M_upper / bd.m_lower * (1 + SLACK)


def inflation(width):
    if width > MAX_WIDTH:
        raise InvalidArgument(f"interval width {width} exceeds 1/4")
    if GROWTH * width >= 1:
        raise InvalidArgument("interval width must be below 1/3.54")
    return 1 + GROWTH * width / (1 - GROWTH * width)


@dataclass(frozen=True)
class CertInterval:
    z_lo: float
    z_hi: float
    bound: float
    anchor_z: float
    anchor_value: float


def _interval(anchor_value, z_lo, z_hi):
    return CertInterval(z_lo, z_hi, anchor_value * inflation(z_hi - z_lo), z_lo, anchor_value)


def certify_interval(q, z_lo, z_hi, mode="computed", cutoff=mertens.BRACKET_CUTOFF):
    z_lo = float(z_lo)
    z_hi = float(z_hi)
    if not 0 < z_lo <= z_hi <= 2:
        raise DomainError("need 0 < z_lo <= z_hi <= 2")
    fac = inflation(z_hi - z_lo)
    anchor = b_q(q, z_lo, mode=mode, cutoff=cutoff)
    return CertInterval(z_lo, z_hi, anchor * fac, z_lo, anchor)


@dataclass
class SubdivisionConfig:
    start_width: float = 0.01
    min_width: float = 1e-6
    mode: str = "computed"
    cutoff: int = mertens.BRACKET_CUTOFF

    def __post_init__(self):
        if not 0 < self.min_width <= self.start_width <= MAX_WIDTH:
            raise InvalidArgument("need 0 < min_width <= start_width <= 1/4")


@dataclass
class PrimeResult:
    q: object  # prime, or "tail"
    intervals: list
    verdict: str
    offending: list = field(default_factory=list)


@dataclass
class CertificationReport:
    q_range: tuple
    z_range: tuple
    config: dict
    primes: list
    tail_argument: dict
    overall: bool

    def to_json_obj(self):
        return {
            "z_range": list(self.z_range),
            "q_range": list(self.q_range),
            "q_max": self.q_range[1],
            "config": self.config,
            "primes": [
                {"q": r.q, "verdict": r.verdict,
                 "intervals": [{"lo": iv.z_lo, "hi": iv.z_hi, "bound": iv.bound} for iv in r.intervals],
                 "offending": [{"lo": iv.z_lo, "hi": iv.z_hi, "bound": iv.bound} for iv in r.offending]}
                for r in self.primes
            ],
            "tail": self.tail_argument,
            "overall": self.overall,
        }


def _pieces(z_lo, z_hi, width):
    n = max(1, math.ceil((z_hi - z_lo) / width - 1e-9))
    edges = [z_lo + (z_hi - z_lo) * j / n for j in range(n + 1)]
    edges[-1] = z_hi
    return list(zip(edges[:-1], edges[1:]))


def _subdivide(anchor_fn, z_lo, z_hi, cfg):
    """Adaptive bisection; returns (leaves, verdict, offending leaves)."""
    leaves, bad, stuck = [], [], []
    stack = list(reversed(_pieces(z_lo, z_hi, cfg.start_width)))
    while stack:
        a, b = stack.pop()
        anchor = anchor_fn(a)
        iv = _interval(anchor, a, b)
        if iv.bound < 1:
            leaves.append(iv)
        elif anchor >= 1:
            # no subdivision can help at this anchor
            leaves.append(iv)
            bad.append(iv)
        elif (b - a) / 2 < cfg.min_width:
            leaves.append(iv)
            stuck.append(iv)
        else:
            m = 0.5 * (a + b)
            stack.append((m, b))
            stack.append((a, m))
    verdict = "fail" if bad else ("inconclusive" if stuck else "pass")
    return leaves, verdict, bad + stuck


@lru_cache(maxsize=65536)
def _b_table(z, cutoff, mode):
    tab = mertens.bundle_table(z, cutoff, mode)
    return _i_upper(z) * tab["r_upper"] * tab["mu_upper"] / tab["m_lower"] * (1 + SLACK)


def _anchor_fn(q, cfg):
    if q <= cfg.cutoff:
        idx = int(np.searchsorted(mertens.bundle_table(1.0, cfg.cutoff, cfg.mode)["primes"], q))
        return lambda z: float(_b_table(float(z), cfg.cutoff, cfg.mode)[idx])
    return lambda z: b_q(q, z, mode=cfg.mode, cutoff=cfg.cutoff)


def certify_prime(q, z_lo, z_hi, cfg=None):
    cfg = cfg or SubdivisionConfig()
    leaves, verdict, offending = _subdivide(_anchor_fn(q, cfg), z_lo, z_hi, cfg)
    return PrimeResult(int(q), leaves, verdict, offending)


def certify_tail(q_first, z_lo, z_hi, cfg=None):
    cfg = cfg or SubdivisionConfig()
    fn = lambda z: tail_functional(q_first, z, cfg.mode, cfg.cutoff)  # noqa: E731
    leaves, verdict, offending = _subdivide(fn, z_lo, z_hi, cfg)
    return PrimeResult("tail", leaves, verdict, offending)


def _certify_prime_job(args):
    return certify_prime(*args)


def certify_strong(z_lo, z_hi, q_max=300, cfg=None, workers=1):
    """Certify every odd prime q <= q_max and, uniformly, every prime beyond."""
    cfg = cfg or SubdivisionConfig()
    z_lo = float(z_lo)
    z_hi = float(z_hi)
    if not 0 < z_lo < z_hi <= 2:
        raise DomainError("need 0 < z_lo < z_hi <= 2")
    q_max = int(q_max)
    if q_max < 3:
        raise InvalidArgument("q_max must be at least 3")
    sv = shared_sieve(max(q_max * 2, 1000))
    primes = [int(p) for p in sv.primes if 3 <= p <= q_max]
    q_next = int(sv.primes[np.searchsorted(sv.primes, q_max, side="right")])
    jobs = [(q, z_lo, z_hi, cfg) for q in primes]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_certify_prime_job, jobs, chunksize=4))
    else:
        results = [_certify_prime_job(j) for j in jobs]
    tail = certify_tail(q_next, z_lo, z_hi, cfg)
    worst = max(iv.bound for iv in tail.intervals)
    tail_arg = {
        "q_threshold": q_next,
        "uniform_bound": worst,
        "pass": tail.verdict == "pass",
        "verdict": tail.verdict,
        "intervals": len(tail.intervals),
    }
    overall = all(r.verdict == "pass" for r in results) and tail_arg["pass"]
    return CertificationReport((primes[0] if primes else 3, q_max), (z_lo, z_hi), asdict(cfg), results,
                               tail_arg, overall)


REPORT_SCHEMA = {
    "type": "object",
    "required": ["z_range", "q_max", "primes", "tail", "overall"],
    "properties": {
        "z_range": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
        "q_max": {"type": "integer"},
        "primes": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["q", "intervals", "verdict"],
                "properties": {
                    "q": {"type": "integer"},
                    "verdict": {"enum": ["pass", "fail", "inconclusive"]},
                    "intervals": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["lo", "hi", "bound"],
                            "properties": {"lo": {"type": "number"}, "hi": {"type": "number"},
                                           "bound": {"type": "number"}},
                        },
                    },
                },
            },
        },
        "tail": {"type": "object", "required": ["q_threshold", "uniform_bound", "pass"]},
        "overall": {"type": "boolean"},
    },
}
