import random

import pytest
from gmpy2 import mpq
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from psverify.characters import SmoothChar
from psverify.coeff import CycloNum

settings.register_profile(
    "psverify", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("psverify")

ACCEPTANCE_RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}")


@pytest.fixture
def rng():
    return random.Random(20240601)


small_rationals = st.builds(
    lambda n, d: mpq(n, d), st.integers(-12, 12), st.integers(1, 7)
)


@st.composite
def cyclo_nums(draw, orders=(1, 3, 4, 5, 8, 12)):
    order = draw(st.sampled_from(orders))
    phi = len(CycloNum.rational(0, order).coeffs)
    coeffs = draw(st.lists(small_rationals, min_size=phi, max_size=phi))
    return CycloNum(order, coeffs)


def unramified(p, value, f=1):
    return SmoothChar.unramified(p, f, value)
