import numpy as np
import pytest

from cartanbundles.sampling import Sampler


@pytest.fixture
def small():
    """Reduced sample counts for unit tests; the acceptance suite uses the defaults."""
    return Sampler(seed=7, points=12, pairs=12, groups=8)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
