import pytest
from hypothesis import settings

from nowhere_smooth import cantor_profile as cp
from nowhere_smooth import radial_profile as rp

# reproducible property runs
settings.register_profile("repro", derandomize=True)
settings.load_profile("repro")


@pytest.fixture(scope="session")
def cfg():
    return rp.ProfileConfig.build()


@pytest.fixture(scope="session")
def ccfg():
    return cp.CantorConfig()


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
