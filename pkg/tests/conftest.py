import numpy as np
import pytest

from becscat.gpe_solver import default_grid, solve_ground_state
from becscat.grid import RadialProfile, build_grid, normalize

SWEEP_GAMMAS = (0.1, 1.0, 10.0, 100.0, 1000.0)

_acceptance_lines = []


def record_criterion(number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title} -- {detail}"
    _acceptance_lines.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def sweep_states():
    """Converged ground states on the default grids (n = 4096)."""
    return {g: solve_ground_state(g, default_grid(g)) for g in SWEEP_GAMMAS}


@pytest.fixture(scope="session")
def gaussian_grid():
    return build_grid(4096, 8.0)


@pytest.fixture(scope="session")
def gaussian_profile(gaussian_grid):
    r = gaussian_grid.r
    return normalize(RadialProfile(gaussian_grid, r * np.exp(-0.5 * r * r)))
