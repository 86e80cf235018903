import numpy as np
import pytest

from dressing import random_fields as rf


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def points(rng):
    return rf.sample_points(rng, 20)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
