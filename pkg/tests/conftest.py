from pathlib import Path

import numpy as np
import pytest

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def zeta_zeros() -> np.ndarray:
    return np.loadtxt(DATA / "zeta_zeros_50.txt")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_LOG = pytest.StashKey[list]()


@pytest.fixture(scope="session")
def acceptance_log(pytestconfig) -> list:
    return pytestconfig.stash.setdefault(_LOG, [])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LOG, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
