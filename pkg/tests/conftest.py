import sys
import hypothesis
import numpy as np
import pytest

from lopt.data import make_rng
from lopt.measures import DiscreteMeasure

hypothesis.settings.register_profile("default", max_examples=40, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=5, deadline=None)
hypothesis.settings.load_profile("default")


def uniform_pair(rng, n0, n1=None, scale=1.0, mass=1.0):
    n1 = n0 if n1 is None else n1
    a = DiscreteMeasure.uniform(rng.random((n0, 2)) * scale, mass)
    b = DiscreteMeasure.uniform(rng.random((n1, 2)) * scale, mass)
    return a, b


def unit_measure(rng, n, scale=3.0):
    """Atoms of weight 1/10 each; plans between such measures are maps at every vertex."""
    return DiscreteMeasure(rng.random((n, 2)) * scale, np.full(n, 0.1))


def integer_pair(rng, max_units=10, max_atoms=4, scale=3.0):
    """Random measures with integer weights and at most ``max_units`` total units."""
    while True:
        n0, n1 = rng.integers(1, max_atoms + 1, size=2)
        w0 = rng.integers(1, 4, size=n0).astype(float)
        w1 = rng.integers(1, 4, size=n1).astype(float)
        if w0.sum() + w1.sum() <= max_units:
            return (DiscreteMeasure(rng.random((n0, 2)) * scale, w0),
                    DiscreteMeasure(rng.random((n1, 2)) * scale, w1))


@pytest.fixture
def rng():
    return make_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    rows = getattr(mod, "REPORT", None)
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, ok, detail in sorted(rows):
        terminalreporter.write_line(f"criterion {criterion:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
