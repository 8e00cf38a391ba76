import math

import numpy as np
import pytest

from hermbound.functions import GaussianMixture

# Filled by test_acceptance.py; printed once at the end of the session.
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def phi(t):
    return np.exp(-0.5 * np.asarray(t, dtype=float) ** 2) / math.sqrt(2 * math.pi)


TWO_BUMP = GaussianMixture(((1, 2, -0.5), (0.5, 4, 1)))
