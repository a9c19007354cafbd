import sys
from pathlib import Path

import pytest

from entgeom.laurent import parse_poly
from entgeom.shiftsys import principal, product

SYSTEMS = Path(__file__).resolve().parent.parent / "systems"


@pytest.fixture(scope="session")
def systems_dir() -> Path:
    return SYSTEMS


@pytest.fixture(scope="session")
def x1():
    return principal(2, parse_poly("1 + u1 + u2", 2, 2), "X1")


@pytest.fixture(scope="session")
def x2():
    return principal(2, parse_poly("1 + u1 + u2^-1", 2, 2), "X2")


@pytest.fixture(scope="session")
def x12(x1, x2):
    return product([x1, x2], "X1xX2")


@pytest.fixture(scope="session")
def f1():
    return principal(2, parse_poly("1 + u1 + u2 + u3", 3, 2), "f1")


@pytest.fixture(scope="session")
def f2():
    return principal(2, parse_poly("1 + u1^-1 + u2 + u3", 3, 2), "f2")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
