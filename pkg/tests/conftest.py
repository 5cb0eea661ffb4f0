import numpy as np
import pytest

from swarmtaxis.fields import ArenaKind, build_arena

# acceptance-criterion PASS/FAIL lines, echoed after the run summary so they
# stay visible even though pytest captures stdout of passing tests
acceptance_lines = []


def pytest_terminal_summary(terminalreporter):
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def center_arena():
    return build_arena(ArenaKind.CENTER, 10)


@pytest.fixture
def rng():
    return np.random.default_rng(42)
