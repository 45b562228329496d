import math
import random

import mpmath as mp
import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from primlab import arith, primsets as ps
from primlab.errors import DomainError, InvalidArgument, PreconditionError, ResourceLimitError

INC = ps.INCREASING


def test_is_primitive_examples(small_sieve):
    assert ps.is_primitive([4, 6, 9, 10], small_sieve)
    assert not ps.is_primitive([2, 6], small_sieve)
    assert ps.is_primitive(list(range(8, 16)), small_sieve)


def test_is_l_primitive_examples(small_sieve):
    # 6 = 2 * 3 and P(2) = 2 <= p(3) = 3, so 6 lies in L_2
    assert not ps.is_l_primitive([2, 6], INC, small_sieve)
    assert ps.in_l_set(6, 2, INC, small_sieve)
    assert ps.is_l_primitive([6, 10], INC, small_sieve)
    # 3 | 6 but 6 is not in L_3: not primitive, still L-primitive
    assert not ps.is_primitive([3, 6], small_sieve)
    assert ps.is_l_primitive([3, 6], INC, small_sieve)


def _l_set_brute(a, hi, order, sieve):
    out = set()
    big = max((p for p, _ in arith.factorize(sieve, a).pairs), key=order.rank) if a > 1 else None
    for b in range(1, hi // a + 1):
        if b == 1 or a == 1:
            out.add(a * b)
            continue
        small = min((p for p, _ in arith.factorize(sieve, b).pairs), key=order.rank)
        if order.rank(big) <= order.rank(small):
            out.add(a * b)
    return out


orders = st.one_of(st.just(INC), st.permutations([2, 3, 5, 7, 11, 13]).map(
    lambda perm: ps.PrimeOrder.explicit(perm[:4])))


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 60), orders)
def test_in_l_set_matches_definition(small_sieve, a, order):
    hi = 600
    brute = _l_set_brute(a, hi, order, small_sieve)
    fast = {n for n in range(1, hi + 1) if ps.in_l_set(n, a, order, small_sieve)}
    assert brute == fast


random_sets = st.lists(st.integers(2, 300), min_size=1, max_size=12, unique=True)


@settings(max_examples=80, deadline=None)
@given(random_sets, orders)
def test_primitive_implies_l_primitive(small_sieve, A, order):
    if ps.is_primitive(A, small_sieve):
        assert ps.is_l_primitive(A, order, small_sieve)


@settings(max_examples=60, deadline=None)
@given(random_sets, orders)
def test_l_primitive_iff_l_sets_disjoint(small_sieve, A, order):
    lp = ps.is_l_primitive(A, order, small_sieve)
    if lp:
        ok, coll = ps.lset_disjointness_check(A, order, 3000, small_sieve)
        assert ok and not coll
    else:
        # some a' in A lies in L_a for another a in A
        assert any(a != b and ps.in_l_set(b, a, order, small_sieve) for a in A for b in A)


def test_lset_examples(small_sieve):
    assert ps.lset_disjointness_check([2, 3], INC, 30, small_sieve)[0]
    assert ps.in_l_set(4, 2, INC, small_sieve)
    layer = arith.enumerate_layer(small_sieve, 2, 20)
    assert ps.lset_disjointness_check(layer, INC, 100, small_sieve)[0]
    with pytest.raises(PreconditionError):
        ps.lset_disjointness_check([2, 6], INC, 30, small_sieve)


def test_erdos_sum(small_sieve):
    assert ps.erdos_sum([2], 1, small_sieve) == pytest.approx(1 / (2 * math.log(2)), rel=1e-15)
    assert ps.erdos_sum([2], 2, small_sieve) == pytest.approx(2 / (2 * math.log(2) ** 2), rel=1e-15)
    primes = small_sieve.primes[small_sieve.primes <= 100].tolist()
    mp.mp.dps = 30
    ref = mp.fsum(1 / (p * mp.log(p)) for p in primes)
    assert len(primes) == 25
    assert ps.erdos_sum(primes, 1, small_sieve) == pytest.approx(float(ref), rel=1e-15)
    assert float(ref) == pytest.approx(1.4215672, abs=1e-7)
    with pytest.raises(DomainError):
        ps.erdos_sum([1, 2], 1, small_sieve)


def test_dz_of_L_examples(small_sieve):
    for z in (0.3, 1.0, 1.7):
        assert ps.dz_of_L([2], z, INC, small_sieve) == pytest.approx(z / 2, rel=1e-15)


@pytest.mark.parametrize("z", [0.5, 1.0, 1.5, 1.99])
def test_dz_telescoping_against_mpmath(sieve, z):
    mp.mp.dps = 40
    primes = sieve.primes[:10**4].tolist()
    zz = mp.mpf(z)
    prod = mp.mpf(1)
    checkpoints = {1, 2, 10, 100, 1000, 5000, 10**4}
    for k, p in enumerate(primes, start=1):
        prod *= 1 - zz / p
        if k in checkpoints:
            v = ps.dz_of_L(primes[:k], z, INC, sieve)
            assert abs(v - float(1 - prod)) <= 1e-14


def test_erdos_inequality_examples(small_sieve):
    f = ps.MultiplicativeWeight("z_over_p", 1.0)
    lhs, ok = ps.erdos_inequality_check([2, 3], f, INC, small_sieve)
    assert lhs == pytest.approx(2 / 3, rel=1e-15) and ok
    with pytest.raises(PreconditionError):
        ps.erdos_inequality_check([2, 6], f, INC, small_sieve)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9), orders)
def test_erdos_inequality_random_weights(small_sieve, seed, order):
    rng = random.Random(seed)
    table = {int(p): rng.random() for p in small_sieve.primes[:60]}
    f = ps.MultiplicativeWeight("table", table=table)
    A = sorted(rng.sample(range(2, 200), 15))
    # greedy reduction to an L-primitive set
    keep = []
    for a in A:
        if ps.is_l_primitive(keep + [a], order, small_sieve):
            keep.append(a)
    lhs, ok = ps.erdos_inequality_check(keep, f, order, small_sieve)
    assert ok


def test_weight_validation():
    with pytest.raises(InvalidArgument):
        ps.MultiplicativeWeight("z_over_p", 2.5)
    with pytest.raises(InvalidArgument):
        ps.MultiplicativeWeight("table", table={2: 1.5})


def test_antichain_enumeration_small(small_sieve):
    assert sorted(ps.enumerate_antichains(3, small_sieve)) == [[], [1], [2], [2, 3], [3]]
    got4 = sorted(map(tuple, ps.enumerate_antichains(4, small_sieve)))
    assert got4 == sorted([(), (1,), (2,), (3,), (2, 3), (4,), (3, 4)])


@pytest.mark.parametrize("lo, hi", [(1, 10), (2, 12), (3, 16)])
def test_antichain_enumerators_agree(small_sieve, lo, hi):
    rec = sorted(map(tuple, ps.enumerate_antichains(hi, small_sieve, range_lo=lo)))
    bits = sorted(map(tuple, ps.antichains_bitmask(hi, range_lo=lo)))
    assert rec == bits
    assert len(rec) == len(set(rec))


def test_antichain_counts(small_sieve):
    assert sum(1 for _ in ps.enumerate_antichains(10, small_sieve)) == 103
    assert sum(1 for _ in ps.enumerate_antichains(12, small_sieve, range_lo=2)) == 252


def test_antichain_guards(small_sieve):
    with pytest.raises(ResourceLimitError):
        next(ps.enumerate_antichains(41, small_sieve))
    with pytest.raises(ResourceLimitError):
        ps.antichains_bitmask(30)


def test_tightness_layers(small_sieve):
    # b coprime to the first i odd primes; b may be even
    assert ps.tightness_layer(1, 1, 40, small_sieve) == [6, 15, 21, 33, 39]
    assert ps.tightness_layer(1, 2, 80, small_sieve) == [12, 30, 42, 66, 75, 78]
    assert ps.tightness_layer(1, 1, 40, small_sieve, exclude_two=True) == [15, 21, 33, 39]
    assert ps.tightness_layer(1, 2, 80, small_sieve, exclude_two=True) == [75]


@pytest.mark.parametrize("exclude_two", [False, True])
def test_tightness_union_primitive(small_sieve, exclude_two):
    U = []
    for i, C in zip((1, 2, 3), (1, 2, 3)):
        U += ps.tightness_layer(i, C, 5000, small_sieve, exclude_two)
    assert len(U) == len(set(U))
    assert ps.is_primitive(U, small_sieve)


def test_dz_layer_two_direct(sieve):
    # sum over a in P_2 of 1/a prod_{p < P(a)} (1 - 1/p), term by term with exact prefix products
    from fractions import Fraction
    X = 3000
    primes = [int(p) for p in sieve.primes if p <= X]
    prefix = {}
    acc = Fraction(1)
    for p in primes:
        prefix[p] = acc
        acc *= 1 - Fraction(1, p)
    layer = [n for n in range(4, X + 1) if sieve.big_omega[n] == 2]
    ref = sum((prefix[int(sieve.lpf[a])] / a for a in layer), Fraction(0))
    got = ps.dz_of_L(layer, 1.0, INC, sieve)
    assert got == pytest.approx(float(ref), rel=1e-13)
