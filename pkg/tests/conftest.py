import numpy as np
import pytest

from photon_shaper.specgrid import SampledGrid, gaussian_amplitude

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def desk_grid():
    """Desk-scale grid: 16384 points, Omega = 0.3 sits on bin 100."""
    return SampledGrid(16384, 0.003)


@pytest.fixture(scope="session")
def small_grid():
    return SampledGrid(1024, 0.05)


@pytest.fixture
def rng():
    return np.random.default_rng(20061017)


@pytest.fixture(scope="session")
def default_pulse(desk_grid):
    return gaussian_amplitude(desk_grid, 0.02)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
