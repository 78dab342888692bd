import numpy as np
import pytest

from lineintercept import density as dens
from lineintercept import kernels


@pytest.fixture
def unif():
    return dens.uniform(1.0)


@pytest.fixture
def ramp():
    """Ramp up to 2 at 1/4 then down to 0 at 1."""
    return dens.ramp_density(1.0)


@pytest.fixture(params=kernels.available())
def backend(request):
    with kernels.backend(request.param):
        yield request.param



ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
