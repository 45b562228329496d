"""High-precision reference values for gamma_1(z).

    python3 tests/oracles/gamma1.py 0.3 1.0

Uses gamma_1(z) = (1/Gamma(z)) int_0^inf P(1 + v^(1/z)) dv. On [0, d] the
expansion P(s) = -log(s - 1) + c + O(s - 1) is integrated in closed form, with
c = lim (P(s) + log(s - 1)). Slow: mpmath's prime zeta near s = 1 dominates.
"""
import sys

import mpmath as mp

mp.mp.dps = 40
TINY = mp.mpf("1e-35")
C = mp.primezeta(1 + TINY) + mp.log(TINY)


def gamma1(z):
    z = mp.mpf(z)
    d = mp.mpf("1e-10")
    head = -(1 / z) * (d * mp.log(d) - d) + C * d
    pts = [d, mp.mpf("1e-6"), mp.mpf("1e-3"), mp.mpf("0.05"), mp.mpf("0.3"), 1, 2, 4, 16, mp.inf]
    body = mp.quad(lambda v: mp.primezeta(1 + v ** (1 / z)), pts)
    return (head + body) / mp.gamma(z)


if __name__ == "__main__":
    for arg in sys.argv[1:]:
        print(arg, mp.nstr(gamma1(arg), 22))
