import json
import math

import jsonschema
import mpmath as mp
import pytest
from hypothesis import given, settings, strategies as st

from primlab import mertens, strongprime as sp
from primlab.errors import DomainError, InvalidArgument


def test_i_closed_forms():
    assert sp.i_of_z(2.0) == pytest.approx(0.5, abs=1e-14)
    assert sp.i_of_z(1.0) == pytest.approx(math.pi / 4, abs=1e-14)
    assert sp.i_of_z(0.44) > sp.i_of_z(1.0) > sp.i_of_z(2.0)
    with pytest.raises(DomainError):
        sp.i_of_z(0.0)
    with pytest.raises(DomainError):
        sp.i_of_z(2.5)


@pytest.mark.parametrize("z", [0.1, 0.44, 0.73, 1.3, 1.9])
def test_i_against_mpmath(z):
    mp.mp.dps = 25
    ref = mp.quad(lambda t: (1 + t ** (2 / mp.mpf(z))) ** (-z), [0, 0.5, 1])
    v, err = sp.i_of_z_with_error(z)
    assert abs(v - float(ref)) <= err


def test_b_q_examples():
    assert sp.b_q(3, 1.0) < 1
    assert sp.b_q(3, 2.0) < 1
    assert sp.b_q(5, 0.44) < 1


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([3, 5, 7, 31, 211, 293]), st.floats(0.2, 2.0))
def test_b_q_below_crude(q, z):
    assert sp.b_q(q, z) <= sp.b_q_crude(q, z)


def test_b_q_bundle_mismatch():
    bd = mertens.mertens_bundle(5, 1.0)
    with pytest.raises(InvalidArgument):
        sp.b_q(3, 1.0, bundle=bd)


def test_inflation():
    assert sp.inflation(0.0) == 1.0
    assert sp.inflation(0.01) == pytest.approx(1 + 0.0354 / (1 - 0.0354))
    assert sp.inflation(0.25) == pytest.approx(1 + 0.885 / 0.115)
    with pytest.raises(InvalidArgument):
        sp.inflation(0.26)


def test_certify_interval():
    iv = sp.certify_interval(3, 1.0, 1.01)
    assert iv.anchor_value == sp.b_q(3, 1.0)
    assert iv.bound == pytest.approx(iv.anchor_value * 1.0367, rel=1e-4)
    iv0 = sp.certify_interval(3, 1.0, 1.0)
    assert iv0.bound == iv0.anchor_value


def test_tail_dominates_individual_primes():
    for z in (0.44, 1.0, 2.0):
        t = sp.tail_functional(307, z)
        for q in (307, 311, 1009, 10007):
            assert sp.b_q(q, z) <= t


@pytest.mark.parametrize("z", [0.5, 1.0, 1.7])
def test_b_q_growth_bounded(z):
    # numerical right derivative of the certified bound stays below 3.54 b_q
    h = 1e-5
    for q in (3, 5, 7, 13):
        a, b = sp.b_q(q, z), sp.b_q(q, z + h)
        assert (b - a) / h <= sp.GROWTH * a


def test_certify_small_z_is_not_a_pass():
    r = sp.certify_prime(3, 0.1, 0.2)
    assert r.verdict in ("fail", "inconclusive")
    assert r.offending


def test_certify_near_two():
    assert sp.certify_prime(5, 1.9, 2.0).verdict == "pass"


def test_leaves_cover_range():
    r = sp.certify_prime(3, 0.44, 0.6)
    edges = sorted((iv.z_lo, iv.z_hi) for iv in r.intervals)
    assert edges[0][0] == 0.44 and edges[-1][1] == pytest.approx(0.6)
    for (a, b), (c, d) in zip(edges, edges[1:]):
        assert b == c
    assert all(iv.bound < 1 for iv in r.intervals)


def test_certify_strong_full():
    rep = sp.certify_strong(0.44, 2.0, 300)
    assert rep.overall
    assert [r.q for r in rep.primes][:4] == [3, 5, 7, 11]
    assert rep.primes[-1].q == 293
    assert rep.tail_argument["q_threshold"] == 307 and rep.tail_argument["pass"]
    obj = json.loads(json.dumps(rep.to_json_obj()))
    jsonschema.validate(obj, sp.REPORT_SCHEMA)


def test_certify_strong_published_mode():
    cfg = sp.SubdivisionConfig(mode="published")
    assert sp.certify_strong(0.44, 2.0, 300, cfg).overall


def test_certify_strong_parallel_matches_serial():
    a = sp.certify_strong(0.9, 1.1, 50)
    b = sp.certify_strong(0.9, 1.1, 50, workers=2)
    assert a.to_json_obj() == b.to_json_obj()


def test_subdivision_config_validation():
    with pytest.raises(InvalidArgument):
        sp.SubdivisionConfig(start_width=0.3)
    with pytest.raises(InvalidArgument):
        sp.SubdivisionConfig(min_width=0.1, start_width=0.01)
