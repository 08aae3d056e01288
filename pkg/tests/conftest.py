from __future__ import annotations

import math

import numpy as np
import pytest

from boundary_ising.region import regular_polygon, staple_region

SQRT2 = math.sqrt(2.0)
LAMBDA = SQRT2 - 1  # square-region correlation


@pytest.fixture
def square():
    return regular_polygon(2)


@pytest.fixture
def staple():
    return staple_region()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# --- acceptance summary ---------------------------------------------------------

_ACCEPTANCE = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = {}


@pytest.fixture
def acceptance(request):
    """Record ``(criterion, passed, detail)``; printed in the terminal summary."""
    store = request.config.stash[_ACCEPTANCE]

    def record(number: int, passed: bool, detail: str) -> None:
        store[number] = (passed, detail)
        print(f"criterion {number}: {'PASS' if passed else 'FAIL'} - {detail}")

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    store = config.stash.get(_ACCEPTANCE, {})
    if not store:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(store):
        passed, detail = store[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'} - {detail}")
