from __future__ import annotations

import numpy as np
import pytest

from _support import integer_curve


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(params=[2, 3, 4, 5])
def small_curve(request):
    return integer_curve(request.param)


def pytest_terminal_summary(terminalreporter):
    try:
        import test_acceptance
    except ImportError:
        return
    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
