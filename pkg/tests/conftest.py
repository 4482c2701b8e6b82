import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from cnumrange.prng import SplitMix64

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

ACCEPTANCE = {}


def random_c(seed, k, distinct=True):
    """Random sorted weights with one decimal, so pair sums are exact-ish but generic."""
    rng = SplitMix64(seed)
    while True:
        c = tuple(sorted((float(x) for x in np.round(2 * rng.normal(k), 1)), reverse=True))
        if c[0] != c[-1] and (not distinct or c[0] + c[-1] != 0):
            return c


@pytest.fixture
def record():
    def _record(number, passed, detail):
        ACCEPTANCE[number] = (passed, detail)
    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {detail}")
