import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from primlab import _core, _fallback

compiled = pytest.importorskip("primlab._kernels")


@pytest.mark.parametrize("n", [2, 3, 10, 97, 1000, 65536, 10**6 + 3])
def test_spf_tables_agree(n):
    a = compiled.spf_table(n)
    b = _fallback.spf_table(n)
    assert np.array_equal(a, b)
    for x, y in zip(compiled.factor_tables(a), _fallback.factor_tables(b)):
        assert np.array_equal(x, y)


def test_factor_tables_accept_readonly_buffer():
    spf = compiled.spf_table(1000)
    spf.setflags(write=False)
    om, _, _ = compiled.factor_tables(spf)
    assert om[360] == 6


def _graph(n, edges):
    # arcs in pairs (u->v, v->u); CSR over arc tails
    heads, tails, caps = [], [], []
    for u, v, c in edges:
        heads += [v, u]
        tails += [u, v]
        caps += [float(c), 0.0]
    tails = np.asarray(tails, dtype=np.int64)
    order = np.argsort(tails, kind="stable").astype(np.int64)
    start = np.searchsorted(tails[order], np.arange(n + 1)).astype(np.int64)
    return start, order, np.asarray(heads, dtype=np.int64), np.asarray(caps)


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 9).flatmap(lambda n: st.tuples(
    st.just(n),
    st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1), st.integers(0, 20)), max_size=30))))
def test_dinic_agrees_with_fallback(case):
    n, edges = case
    edges = [(u, v, c) for u, v, c in edges if u != v]
    start, order, head, cap = _graph(n, edges)
    r1, r2 = cap.copy(), cap.copy()
    f1 = compiled.dinic(n, start, order, head, r1, 0, n - 1, 0.0)
    f2 = _fallback.dinic(n, start, order, head, r2, 0, n - 1, 0.0)
    assert f1 == pytest.approx(f2, abs=1e-9)
    # flow conservation and capacity on the compiled residuals
    flow = cap - r1
    net = np.zeros(n)
    for e in range(0, len(cap), 2):
        f = flow[e]
        assert -1e-9 <= f <= cap[e] + 1e-9
        net[head[e + 1]] -= f
        net[head[e]] += f
    assert np.allclose(net[1:-1], 0)
    assert net[n - 1] == pytest.approx(f1)


def test_backend_env_switch():
    code = "import primlab; print(primlab.BACKEND)"
    env = dict(os.environ, PRIMLAB_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
    assert _core.BACKEND == "compiled"
