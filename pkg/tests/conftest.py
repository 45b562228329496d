import sys

import pytest

from primlab import arith


@pytest.fixture(scope="session")
def sieve():
    return arith.shared_sieve(10**6)


@pytest.fixture(scope="session")
def small_sieve():
    return arith.build_sieve(10**4)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
