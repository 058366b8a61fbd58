import pytest

from chirpwave.gridfield import default_grid

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def grid():
    return default_grid()


@pytest.fixture
def acceptance_log():
    """Record one summary line per acceptance criterion."""
    def log(line):
        ACCEPTANCE_LINES.append(line)
        print(line)
    return log


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
