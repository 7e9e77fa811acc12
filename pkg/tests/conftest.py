import pytest

from qtorus.kfield import FORMAL_TAU, RATIONAL, FieldMode, parse_scalar
from qtorus.multgroup import validate_basis


@pytest.fixture
def g23():
    return validate_basis([2, 3])


@pytest.fixture
def g2tau():
    return validate_basis([2], FORMAL_TAU)


@pytest.fixture
def g23tau():
    return validate_basis([2, 3], FORMAL_TAU)


@pytest.fixture
def sqrt2():
    return FieldMode.algebraic("x^2-2")


def K(text, mode=FORMAL_TAU):
    return parse_scalar(text, mode)


def Q(text):
    return parse_scalar(str(text), RATIONAL)


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(test_acceptance.LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
