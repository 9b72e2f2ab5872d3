"""Shared fixtures and the acceptance-report terminal hook."""
import numpy as np
import pytest

from pulsecool import fock
from pulsecool.model import make_params

# one pass/fail line per acceptance criterion, printed after the test run
ACCEPTANCE_REPORT = {}


def record_criterion(number, title, passed, detail=""):
    ACCEPTANCE_REPORT[number] = (title, passed, detail)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_REPORT:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_REPORT):
        title, passed, detail = ACCEPTANCE_REPORT[number]
        status = "PASS" if passed else "FAIL"
        line = f"criterion {number:2d} [{status}] {title}"
        if detail:
            line += f" -- {detail}"
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def system25():
    return fock.build_system(25, 25)


@pytest.fixture(scope="session")
def system12():
    return fock.build_system(12, 12)


@pytest.fixture(scope="session")
def system6():
    return fock.build_system(6, 6)


@pytest.fixture
def closed_params():
    return make_params(0.0, 0.0, [(0.0, 0.0)])


@pytest.fixture
def damped_params():
    return make_params(1e-6, 100.0, [(1.35e-3, 0.0)])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
