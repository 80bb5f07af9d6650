import pytest

from helpers import chain_example, running_example, single_flight


@pytest.fixture
def running():
    return running_example()


@pytest.fixture
def chain():
    return chain_example()


@pytest.fixture
def lone():
    return single_flight()


def pytest_terminal_summary(terminalreporter):
    from helpers import ACCEPTANCE

    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
