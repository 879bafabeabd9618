import numpy as np
import pytest

from eseharnack import (ConstantIC, GaussianIC, Grid, ProblemSpec, StepConfig,
                        solve)

# the width-0.2 Gaussian on [-4, 4] with reflecting walls is the shared
# baseline run for the Harnack / residual / classical checks
BASE_BOX = (-4.0, 4.0)
BASE_WIDTH = 0.2
BASE_AMPLITUDE = 1.0


def gaussian_problem(n_points, t_end=1.0, dim=1, box=BASE_BOX, width=BASE_WIDTH,
                     amplitude=BASE_AMPLITUDE, p=2.0, boundary="reflecting",
                     reaction=True):
    grid = Grid((box,) * dim, (n_points,) * dim, boundary)
    center = (0.0,) * dim
    return ProblemSpec(grid, p, GaussianIC(amplitude, width, center), t_end,
                       reaction=reaction)


def constant_problem(level=1.0, t_end=2.0, n_points=16, box=(0.0, 100.0), p=2.0):
    # wide box so the CFL cap never binds and the reaction cap rules the step
    return ProblemSpec(Grid.line(*box, n_points), p, ConstantIC(level), t_end)


@pytest.fixture(scope="session")
def gauss128():
    return solve(gaussian_problem(128), StepConfig(sample_stride=8))


@pytest.fixture(scope="session")
def gauss256():
    return solve(gaussian_problem(256), StepConfig(sample_stride=4))


@pytest.fixture(scope="session")
def gauss512():
    return solve(gaussian_problem(512), StepConfig(sample_stride=2))


@pytest.fixture(scope="session")
def heat256():
    """Reaction-free twin of the baseline (pure heat sanity runs)."""
    return solve(gaussian_problem(256, reaction=False), StepConfig(sample_stride=4))


@pytest.fixture(scope="session")
def const_run():
    """Constant data f0 = 1, p = 2: blows up at exactly T* = 1."""
    return solve(constant_problem(), StepConfig(reaction_safety=0.01, sample_stride=1))


# ---------------------------------------------------------------------------
# acceptance reporting: one pass/fail line per criterion at the end of the run

_ACCEPTANCE_LINES: list[str] = []


def record_acceptance(num: int, name: str, ok: bool, detail: str = "") -> None:
    tag = "PASS" if ok else "FAIL"
    line = f"criterion {num:2d} [{name}]: {tag}"
    if detail:
        line += f"  ({detail})"
    _ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
