import pytest

from siav.catalog import builtin_degree2, default_catalog
from siav.exactmath import IntPolynomial


def P(*coeffs_desc):
    """Polynomial from descending coefficients, the way they are usually written."""
    return IntPolynomial(list(reversed(coeffs_desc)))


@pytest.fixture(scope="session")
def builtins():
    return builtin_degree2()


@pytest.fixture(scope="session")
def catalog():
    return default_catalog()


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
