import pytest

from clannish import catalog
from clannish.field import DEFAULT_FIELD, QQ, Field


@pytest.fixture(scope="session")
def kron():
    return catalog.kronecker()


@pytest.fixture(scope="session")
def c5():
    return catalog.clannish5()


@pytest.fixture(scope="session")
def loop1():
    return catalog.oneloop()


@pytest.fixture(scope="session")
def F():
    return DEFAULT_FIELD


@pytest.fixture(scope="session")
def Q():
    return QQ


@pytest.fixture(scope="session")
def GF2():
    return Field(2)


_ACCEPTANCE: list[str] = []


@pytest.fixture(scope="session")
def acceptance_log():
    return _ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
