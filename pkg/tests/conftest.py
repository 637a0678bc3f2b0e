import os
import warnings

import pytest

from vdw_uniaxial.permittivity import builtin_materials
from vdw_uniaxial.polarizability import builtin_models
from vdw_uniaxial.planar import ContinuumWarning


@pytest.fixture(scope="session")
def materials():
    return builtin_materials()


@pytest.fixture(scope="session")
def models():
    return builtin_models()


@pytest.fixture(scope="session")
def hydrogen(models):
    return models["H-1osc"]


@pytest.fixture(autouse=True)
def _quiet_continuum():
    # many tests deliberately probe a < 3 nm
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ContinuumWarning)
        yield


@pytest.fixture(scope="session")
def graphite_descriptor():
    """Path of a user-supplied graphite descriptor (VDW_GRAPHITE_DATA), or None."""
    path = os.environ.get("VDW_GRAPHITE_DATA")
    return path or None


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE_LINES = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: acceptance criteria")
    config.addinivalue_line("markers", "slow: long-running")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
