import numpy as np
import pytest
from hypothesis import strategies as st

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@st.composite
def stochastic_matrices(draw, n_rows=None, n_cols=None, min_size=1, max_size=5):
    r = n_rows or draw(st.integers(min_size, max_size))
    c = n_cols or draw(st.integers(min_size, max_size))
    w = draw(
        st.lists(st.floats(0.0, 1.0), min_size=r * c, max_size=r * c)
    )
    m = np.array(w).reshape(r, c) + 1e-3
    return m / m.sum(axis=0)


@st.composite
def real_matrices(draw, n_rows=None, n_cols=None, max_size=5, bound=10.0):
    r = n_rows or draw(st.integers(1, max_size))
    c = n_cols or draw(st.integers(1, max_size))
    w = draw(st.lists(st.floats(-bound, bound), min_size=r * c, max_size=r * c))
    return np.array(w).reshape(r, c)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
