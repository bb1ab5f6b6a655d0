import numpy as np
import pytest

from varpro.datagen import EXAMPLE1_GRID, EXAMPLE2_GRID, NoiseSpec, generate_experiment
from varpro.models import builtin_example1, builtin_exp_sum
from varpro.priors import GaussianPrior

EXAMPLE1_A = np.array([1.0, 2.0, 300.0])
EXAMPLE1_B = np.array([10.0])
EXAMPLE2_A = np.array([100.0, 20.0, 4.0])
EXAMPLE2_B = np.array([-0.10, -0.04, -0.02])


@pytest.fixture
def example1_exact():
    """Noiseless Example 1 data with 1% error bars."""
    return generate_experiment(builtin_example1(), EXAMPLE1_A, EXAMPLE1_B, EXAMPLE1_GRID,
                               NoiseSpec(0.0, 0, error_fraction=0.01))


@pytest.fixture
def example2_prior():
    return GaussianPrior([-0.11, -0.05, -0.03], [0.04, 0.04, 0.04])


@pytest.fixture
def example2_data():
    return generate_experiment(builtin_exp_sum(3), EXAMPLE2_A, EXAMPLE2_B, EXAMPLE2_GRID,
                               NoiseSpec(0.02, 7))


# -- acceptance reporting ----------------------------------------------------

_ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    number, title = marker.args
    details = "; ".join(f"{k}={v}" for k, v in item.user_properties)
    _ACCEPTANCE[number] = (title, call.excinfo is None, details)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, ok, details = _ACCEPTANCE[number]
        line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}"
        terminalreporter.write_line(line + (f"  [{details}]" if details else ""))
