import pytest

from subplanck.states import StateParams, normalize

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def params():
    return StateParams()


@pytest.fixture(scope="session")
def state(params):
    return normalize(params)


@pytest.fixture(scope="session")
def product_state(params):
    return normalize(params.with_weights(B=0))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
