from __future__ import annotations

import numpy as np
import pytest

from galgraph import kernels
from galgraph.codec import choose_parameters


@pytest.fixture(scope="session")
def P2():
    return choose_parameters(2)


@pytest.fixture(scope="session")
def P3():
    return choose_parameters(3)


@pytest.fixture(params=kernels.available_backends())
def backend(request):
    """Run a test once per kernel backend, restoring the default afterwards."""
    before = kernels.backend()
    kernels.set_backend(request.param)
    yield request.param
    kernels.set_backend(before)


def brute_table(G) -> np.ndarray:
    n = G.order
    return np.array([[G.mul(a, b) for b in range(n)] for a in range(n)])


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS, key=lambda s: int(s.split(".")[0].split()[-1])):
            terminalreporter.write_line(line)
