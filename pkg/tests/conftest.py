import sys

import pytest

from cobarkit.workspace import load


@pytest.fixture(scope="session")
def ex1():
    return load(fixture="example1")


@pytest.fixture(scope="session")
def ex2():
    return load(fixture="example2")


@pytest.fixture(scope="session")
def comod():
    return load(fixture="comodules")


@pytest.fixture(scope="session")
def X(ex1):
    return ex1.coalgebras["X"]


@pytest.fixture(scope="session")
def C1(ex2):
    return ex2.coalgebras["C1"]


@pytest.fixture(scope="session")
def C2(ex2):
    return ex2.coalgebras["C2"]


@pytest.fixture(scope="session")
def tw(ex1):
    return ex1.twisting


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
