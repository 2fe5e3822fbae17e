import math

import pytest

from diffusion_factor.factor import exhaustive_success_rate

TEST_MODULI = (33, 35, 105, 1363)

ACCEPTANCE_LINES: list[str] = []


def units(n):
    return [a for a in range(1, n) if math.gcd(a, n) == 1]


def brute_order(a, n):
    """Independent order oracle: plain repeated multiplication."""
    x, r = a % n, 1
    while x != 1:
        x = x * a % n
        r += 1
    return r


@pytest.fixture(scope="session")
def success_rates():
    cache = {}

    def get(n):
        if n not in cache:
            cache[n] = exhaustive_success_rate(n)
        return cache[n]

    return get


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
