import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from primlab import special
from primlab.errors import ConvergenceError, DomainError, InvalidArgument
from primlab.quadrature import adaptive_gauss

# twin-prime constant prod_{p > 2} (1 - 1/(p-1)^2); d_2 = 1 / (4 C_2)
TWIN = mp.mpf("0.66016181584686957392781211001455577843262")


def test_zeta_values():
    assert special.zeta_real(2) == pytest.approx(math.pi**2 / 6, rel=1e-15)
    assert special.zeta_real(4) == pytest.approx(math.pi**4 / 90, rel=1e-15)
    assert abs(special.zeta_real(30) - 1) < 1e-9
    with pytest.raises(DomainError):
        special.zeta_real(1.0)


@settings(max_examples=200, deadline=None)
@given(st.floats(1.0 + 1e-9, 80.0))
def test_zeta_against_mpmath(s):
    assert special.zeta_real(s) == pytest.approx(float(mp.zeta(s)), rel=2e-15)


def test_gamma_fn():
    assert special.gamma_fn(1) == 1 and special.gamma_fn(2) == 1
    assert special.gamma_fn(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-15)
    with pytest.raises(DomainError):
        special.gamma_fn(0)


def test_prime_zeta_values(sieve):
    assert special.prime_zeta(2) == pytest.approx(0.4522474200410654985, rel=1e-15)
    assert special.prime_zeta(4) == pytest.approx(0.0769931397642470, rel=1e-14)
    pr = sieve.primes.astype(float)
    partial = math.fsum(pr**-3)
    gap = special.prime_zeta(3) - partial
    assert 0 < gap < 1 / (2 * 1e12)
    with pytest.raises(DomainError):
        special.prime_zeta(1.0)


@settings(max_examples=60, deadline=None)
@given(st.floats(1.0 + 1e-6, 60.0))
def test_prime_zeta_against_mpmath(s):
    mp.mp.dps = 30
    v, err = special.prime_zeta_with_error(s)
    ref = float(mp.primezeta(s))
    # one ulp for rounding the reference to a double
    assert abs(v - ref) <= err + 2.3e-16 * ref


def test_convergence_error_exposes_partial():
    tol = special.SeriesTolerance(abs_tol=1e-30, max_terms=2)
    with pytest.raises(ConvergenceError) as ei:
        special.prime_zeta(1.5, tol)
    assert ei.value.partial is not None


def test_pk_values(sieve):
    assert special.pk_dirichlet(2.0, 0) == 1.0
    assert special.pk_dirichlet(2.0, 1) == special.prime_zeta(2.0)
    p2, p4 = special.prime_zeta(2.0), special.prime_zeta(4.0)
    assert special.pk_dirichlet(2.0, 2) == pytest.approx((p2 * p2 + p4) / 2, rel=1e-15)
    n = np.flatnonzero(sieve.big_omega == 2).astype(float)
    direct = math.fsum(n**-2)
    assert 0 <= special.pk_dirichlet(2.0, 2) - direct < 1e-6


@pytest.mark.parametrize("k", [3, 5, 8])
def test_pk_newton_identity_mpmath(k):
    mp.mp.dps = 30
    s = mp.mpf("1.3")
    P = [None] + [mp.primezeta(m * s) for m in range(1, k + 1)]
    e = [mp.mpf(1)]
    for n in range(1, k + 1):
        e.append(mp.fsum(P[m] * e[n - m] for m in range(1, n + 1)) / n)
    v, err = special.pk_dirichlet_with_error(1.3, k)
    assert abs(v - float(e[k])) <= err + 1e-16


def test_gamma1_one():
    r = special.gamma_k(1, 1.0)
    assert r.value == pytest.approx(1.6366163233512608, abs=1e-13)
    assert r.est_error < 1e-12 and r.rigorous_tail


# gamma_1(z) = (1/Gamma(z)) int_0^inf P(1 + v^(1/z)) dv by mpmath at 40 digits, with the
# [0, 1e-10] piece done analytically from P(s) = -log(s - 1) + c + O(s - 1); see tests/oracles/gamma1.py
GAMMA1_ORACLE = {
    0.3: 1.114521496283402617809,
    1.0: 1.636616323351260967208,
}


@pytest.mark.parametrize("z", sorted(GAMMA1_ORACLE))
def test_gamma1_against_mpmath(z):
    r = special.gamma_k(1, z)
    assert abs(r.value - GAMMA1_ORACLE[z]) <= r.est_error + 1e-15


def test_gamma_k_minimum_at_six():
    vals = [special.gamma_k(k, 1.0).value for k in range(1, 13)]
    assert int(np.argmin(vals)) + 1 == 6


@pytest.mark.parametrize("z", [0.3, 1.0, 1.5])
@pytest.mark.parametrize("k", [1, 2, 4])
def test_schemes_agree(k, z):
    a = special.gamma_k(k, z)
    b = special.gamma_k(k, z, special.QuadratureConfig(scheme="graded-mesh"))
    assert abs(a.value - b.value) <= a.est_error + b.est_error


@pytest.mark.parametrize("z", [0.3, 0.5, 1.0, 1.5, 1.9])
def test_gamma_k_vs_direct_sum(sieve, z):
    for k in range(1, 9):
        r = special.gamma_k(k, z)
        o = special.direct_sum_oracle(sieve, k, z, 10**6)
        assert o.partial <= r.value + r.est_error
        assert abs(r.value - o.partial) <= r.est_error + o.tail_bound
        assert o.rigorous == (z > 1)


def test_gamma1_small_z(sieve):
    r = special.gamma_k(1, 0.01)
    o = special.direct_sum_oracle(sieve, 1, 0.01, 10**6)
    assert o.partial <= r.value
    assert abs(r.value - o.partial) <= r.est_error + o.tail_bound


def test_gamma_k_domain():
    with pytest.raises(DomainError):
        special.gamma_k(2, 2.5)
    with pytest.raises(DomainError):
        special.gamma_k(2, 0.0)


def test_direct_sum_examples(sieve):
    o = special.direct_sum_oracle(sieve, 1, 1.0, 100)
    assert o.partial == pytest.approx(1.421567198994368, rel=1e-14)
    assert special.direct_sum_oracle(sieve, 2, 1.0, 4).partial == pytest.approx(1 / (4 * math.log(4)))
    e = special.direct_sum_oracle(sieve, 5, 1.0, 20)
    assert e.empty and e.partial == 0
    for k in (1, 3):
        for z in (0.5, 1.5):
            big = special.direct_sum_oracle(sieve, k, z, 10**6).partial
            small = special.direct_sum_oracle(sieve, k, z, 10**3).partial
            assert big >= small


def test_big_G():
    assert special.big_G(1.0) == pytest.approx(1.0, abs=1e-15)
    assert special.big_G(1.99) > special.big_G(1.9) > special.big_G(1.5)
    with pytest.raises(DomainError):
        special.big_G(2.0)
    g, gerr = special.big_G_with_error(0.5)
    r = special.gamma_k(20, 0.5)
    # geometric convergence at rate (1/3)^k
    assert abs(r.value - g) < 1e-8


def test_d_w():
    assert special.d_w_const(1.0) == pytest.approx(0.5, rel=1e-15)
    assert special.d_w_const(0.0) == pytest.approx(1.0, rel=1e-15)
    v, err = special.d_w_const_with_error(2.0)
    assert abs(v - float(1 / (4 * TWIN))) <= err + 1e-16
    with pytest.raises(DomainError):
        special.d_w_const(3.0)


def test_asymptotic_eq1():
    for k in range(15, 31):
        g = special.gamma_k(k, 1.0).value
        a = special.gamma_k_asymptotic(k, 1.0, "eq1")
        assert abs(g - a) <= 5 * 2.0**-k * k * math.sqrt(math.log(k))


def test_asymptotic_eq2():
    k = 40
    g = special.gamma_k(k, 2.0).value
    a = special.gamma_k_asymptotic(k, 2.0, "eq2")
    d2 = special.d_w_const(2.0)
    assert a == pytest.approx(d2 / 2 * (40 - 2 * math.log(40)))
    assert abs(g - a) <= 5 * math.sqrt(math.log(k))


def test_asymptotic_sub1_rate():
    g = special.big_G(0.5)
    # below k ~ 12 lower-order terms still dominate; beyond k ~ 26 the differences hit rounding
    ks = list(range(16, 25))
    diffs = [special.gamma_k(k, 0.5).value - g for k in ks]
    slope = np.polyfit(ks, np.log(np.abs(diffs)), 1)[0]
    assert slope == pytest.approx(math.log(1 / 3), abs=0.05)
    pred = [special.gamma_k_asymptotic(k, 0.5, "sub1") - g for k in ks]
    assert all(np.sign(d) == np.sign(p) for d, p in zip(diffs, pred))
    assert all(0.5 <= d / p <= 2 for d, p in zip(diffs, pred))


def test_asymptotic_branch_checks():
    with pytest.raises(InvalidArgument):
        special.gamma_k_asymptotic(5, 1.0, "sub1")
    with pytest.raises(InvalidArgument):
        special.gamma_k_asymptotic(5, 0.5, "eq2")
    with pytest.raises(InvalidArgument):
        special.gamma_k_asymptotic(5, 0.5, "nope")


def test_config_validation():
    with pytest.raises(InvalidArgument):
        special.SeriesTolerance(abs_tol=0)
    with pytest.raises(InvalidArgument):
        special.QuadratureConfig(scheme="simpson")
    a = special.config_digest(special.SeriesTolerance(), special.QuadratureConfig())
    b = special.config_digest(special.SeriesTolerance(), special.QuadratureConfig())
    c = special.config_digest(special.SeriesTolerance(abs_tol=1e-15), special.QuadratureConfig())
    assert a == b != c and len(a) == 16


def test_adaptive_gauss():
    v, err, _ = adaptive_gauss(np.cos, 0, math.pi / 2, 1e-14, 1e-14)
    assert abs(v - 1) <= max(err, 1e-15)
    # a kink at 1/3 is resolved once it is a breakpoint
    v, err, _ = adaptive_gauss(lambda t: np.abs(t - 1 / 3), 0, 1, 1e-14, 1e-14, breakpoints=(1 / 3,))
    assert abs(v - 5 / 18) <= max(err, 1e-15)
    with pytest.raises(ConvergenceError):
        adaptive_gauss(lambda t: t**-0.5, 0, 1, 1e-15, 1e-15, max_panels=50)
