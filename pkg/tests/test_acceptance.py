"""The nine acceptance criteria at their stated tolerances; one PASS/FAIL line each."""
import pytest

from qtorus import acceptance

LINES = []


@pytest.mark.parametrize("criterion", acceptance.CRITERIA, ids=lambda f: f.__name__)
def test_criterion(criterion):
    result = criterion()
    LINES.append(result.line())
    print(result.line())
    if not result.passed:
        print(result.detail)
    assert result.passed, result.detail
