import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from poset_dim_lab import make_poset

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=400, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def posets(draw, min_n=1, max_n=4):
    n = draw(st.integers(min_n, max_n))
    cells = draw(st.lists(st.booleans(), min_size=n * n, max_size=n * n))
    return make_poset(n, np.array(cells, dtype=bool).reshape(n, n))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one line per acceptance criterion, repeated in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":").rstrip("ab"))):
            terminalreporter.write_line(line)
