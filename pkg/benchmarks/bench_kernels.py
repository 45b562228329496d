"""Compiled kernels against the numpy/Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--sieve 10000000] [--flow-n 10000]

Each kernel is timed directly and through the public call that uses it, with
the backend swapped in ``primlab._core``. Results from both backends are
compared so a speed-up never hides a wrong answer.
"""
import argparse
import contextlib
import statistics
import time

import numpy as np

from primlab import _core, _fallback, arith, density

try:
    from primlab import _kernels
except ImportError:
    _kernels = None


@contextlib.contextmanager
def backend(mod):
    saved = (_core.spf_table, _core.factor_tables, _core.dinic)
    _core.spf_table, _core.factor_tables, _core.dinic = mod.spf_table, mod.factor_tables, mod.dinic
    try:
        yield
    finally:
        _core.spf_table, _core.factor_tables, _core.dinic = saved


def bench(fn, repeat):
    times, out = [], None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times), out


def cases(sieve_n, flow_n):
    def sieve_case():
        return arith.build_sieve(sieve_n).spf

    spf = arith.build_sieve(sieve_n).spf

    def tables_case():
        return _core.factor_tables(spf)

    def flow_case():
        sv = arith.shared_sieve(flow_n)
        return density.d_z_density(flow_n, 2.0, sv, method="flow")[0]

    return [(f"spf sieve to {sieve_n:.0e}", sieve_case),
            (f"factor tables to {sieve_n:.0e}", tables_case),
            (f"min-flow D_2({flow_n})", flow_case)]


def same(a, b):
    if isinstance(a, tuple):
        return all(np.array_equal(x, y) for x, y in zip(a, b))
    if isinstance(a, np.ndarray):
        return np.array_equal(a, b)
    return abs(a - b) <= 1e-12 * abs(a)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--sieve", type=int, default=10**7)
    ap.add_argument("--flow-n", type=int, default=10**4)
    a = ap.parse_args()
    if _kernels is None:
        print("compiled extension not built; only the fallback can be timed")
    print(f"{'kernel':32s} {'compiled':>10s} {'fallback':>10s} {'speed-up':>9s}  agree")
    for name, fn in cases(a.sieve, a.flow_n):
        with backend(_fallback):
            t_py, out_py = bench(fn, a.repeat)
        if _kernels is None:
            print(f"{name:32s} {'-':>10s} {t_py:10.4f}")
            continue
        with backend(_kernels):
            t_c, out_c = bench(fn, a.repeat)
        print(f"{name:32s} {t_c:10.4f} {t_py:10.4f} {t_py / t_c:8.1f}x  {same(out_c, out_py)}")


if __name__ == "__main__":
    main()
