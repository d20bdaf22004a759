import sys

import numpy as np
import pytest

from histclass.datagen import generate, planted_spec


@pytest.fixture(scope="session")
def planted_lot():
    """10 000 x 50 lot, 5% positives, 4 planted separator columns."""
    X, labels, cols = generate(planted_spec(m=10_000, n=50, positive_rate=0.05, n_planted=4, seed=0))
    return X, labels, cols


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    """Echo the per-criterion lines recorded by the acceptance tests."""
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
