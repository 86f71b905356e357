import numpy as np
import pytest
from hypothesis import strategies as st

from qoracle.qdict import PolynomialSpec
from qoracle.simcore import StateVector


@st.composite
def polynomials(draw, max_vars=4, max_terms=6, coeff=8):
    n = draw(st.integers(1, max_vars))
    k = draw(st.integers(0, max_terms))
    terms = []
    for _ in range(k):
        c = draw(st.integers(-coeff, coeff))
        vs = draw(st.sets(st.integers(0, n - 1), max_size=n))
        terms.append((c, tuple(sorted(vs))))
    return PolynomialSpec(n, tuple(terms))


def random_state(n, rng):
    v = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
    return StateVector(n, v / np.linalg.norm(v))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
