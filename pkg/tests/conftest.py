from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from superfft.grassmann import GPoly, RingSpec

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

RING = RingSpec(("x", "y"), ("a", "b", "c", "d"))


@pytest.fixture
def ring():
    return RING


coeffs = st.fractions(min_value=-6, max_value=6, max_denominator=4)


@st.composite
def gpolys(draw, ring=RING, parity=None, max_terms=4, max_exp=2, nilpotent=False):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        exps = tuple(draw(st.integers(0, max_exp)) for _ in range(ring.n_even))
        mask = draw(st.integers(0, (1 << ring.n_odd) - 1))
        if parity is not None and bin(mask).count("1") % 2 != parity:
            continue
        if nilpotent and mask == 0:
            continue
        terms[(exps, mask)] = draw(coeffs)
    return GPoly(ring, terms)


def pytest_terminal_summary(terminalreporter):
    try:
        import test_acceptance
    except ImportError:
        return
    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(test_acceptance.RESULTS[k])
