import numpy as np
import pytest

from gib_lab import ModelParams, SolitonSpec, make_grid, soliton_state


@pytest.fixture(scope="session")
def grid_pi():
    return make_grid(np.pi, 32)


@pytest.fixture(scope="session")
def grid():
    return make_grid(50.0, 1024)


@pytest.fixture(scope="session")
def params():
    return ModelParams()


@pytest.fixture(scope="session")
def soliton(grid):
    return soliton_state(grid, SolitonSpec(2.0, 1.5, 0.0))


def band_limited(grid, rng, n_modes=8):
    """Random real trigonometric polynomial using the lowest ``n_modes`` box modes."""
    x = grid.nodes
    u = np.zeros(grid.n_points)
    for m in range(n_modes):
        k = np.pi * m / grid.half_length
        u += rng.normal() * np.cos(k * x) + rng.normal() * np.sin(k * x)
    return u


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if test_acceptance.REPORT:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.REPORT:
            terminalreporter.write_line(line)
