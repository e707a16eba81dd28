import numpy as np
import pytest
from hypothesis import settings, strategies as st

from poncelet_loci.conic import Ellipse

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@st.composite
def tables(draw, lo=1.01, hi=5.0):
    """Non-circular tables with a/b in [lo, hi] and b in [0.2, 3]."""
    b = draw(st.floats(0.2, 3.0))
    r = draw(st.floats(lo, hi))
    return Ellipse(r * b, b)


angles = st.floats(0.0, 2.0 * np.pi, exclude_max=True)


@pytest.fixture
def E21():
    return Ellipse(2.0, 1.0)


@pytest.fixture
def E31():
    return Ellipse(3.0, 1.0)


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if not test_acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(test_acceptance.RESULTS):
        ok, label = test_acceptance.RESULTS[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {label}")
