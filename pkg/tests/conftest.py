"""Shared fixtures plus a terminal summary for the acceptance checks."""

import numpy as np
import pytest

# Acceptance tests append (criterion number, label, passed, detail) here; the
# summary hook prints one line per criterion at the end of the run.
ACCEPTANCE_RESULTS = []


@pytest.fixture(scope="session")
def acceptance_results():
    return ACCEPTANCE_RESULTS


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for num, label, passed, detail in sorted(ACCEPTANCE_RESULTS):
        word = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {num:2d} [{word}] {label}: {detail}")


@pytest.fixture
def rng():
    return np.random.default_rng(0)


def one_1d(x):
    return np.ones_like(np.asarray(x, dtype=np.float64))


def one_2d(x, y):
    return np.ones_like(np.asarray(x, dtype=np.float64))


@pytest.fixture
def const_k1():
    return one_1d


@pytest.fixture
def const_k2():
    return one_2d
