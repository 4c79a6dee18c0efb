import pytest

from lipfree import validate_metric

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def M3():
    return validate_metric(["0", "a", "b"], "0", [[0, 1, 1], [1, 0, 1], [1, 1, 0]])


@pytest.fixture
def U3():
    return validate_metric(["0", "a", "b"], "0", [[0, 2, 2], [2, 0, 1], [2, 1, 0]])


@pytest.fixture
def path3():
    return validate_metric(["0", "1", "2"], "0", [[0, 1, 2], [1, 0, 1], [2, 1, 0]])


@pytest.fixture
def C4():
    return validate_metric(
        ["p0", "p1", "p2", "p3"], "p0",
        [[0, 1, 2, 1], [1, 0, 1, 2], [2, 1, 0, 1], [1, 2, 1, 0]],
    )


@pytest.fixture
def star():
    """Center c in M with three unit legs."""
    return validate_metric(
        ["c", "x", "y", "z"], "c",
        [[0, 1, 1, 1], [1, 0, 2, 2], [1, 2, 0, 2], [1, 2, 2, 0]],
    )
