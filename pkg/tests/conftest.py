import pytest

from leray.fixtures import hollow_triangle, square_circle_map, witness_map
from leray.linalg import Field

FIELDS = [Field(2), Field(5), Field(None)]


@pytest.fixture(params=FIELDS, ids=lambda f: f.name)
def field(request):
    return request.param


@pytest.fixture
def witness():
    return witness_map()


@pytest.fixture
def square_circle():
    return square_circle_map()


@pytest.fixture
def triangle():
    return hollow_triangle()


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
