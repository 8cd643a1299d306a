import numpy as np
import pytest
from hypothesis import settings

from bsgame.channel import params_from_snr

np.seterr(all="raise", under="ignore")

settings.register_profile("default", max_examples=60, deadline=None)
settings.register_profile("fast", max_examples=10, deadline=None)
settings.load_profile("default")

FIG2_W = (0.14, 0.40, 0.46)
FIG4_W = (0.25, 0.11, 0.20, 0.05, 0.25, 0.14)
FIG6_W = (0.75, 0.21, 0.04)


@pytest.fixture
def fig2_params():
    return params_from_snr(5, 3, FIG2_W, 10.0)


@pytest.fixture
def fig6_params():
    return params_from_snr(6, 3, FIG6_W, 10.0)


# One line per acceptance criterion, filled in by test_acceptance.py and
# printed after the run so it survives output capturing.
ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
