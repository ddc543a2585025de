"""One check per acceptance criterion; each prints a single PASS/FAIL line."""

import pytest

from bkkernel.selftest import CRITERIA, run_criterion


@pytest.mark.parametrize("name", list(CRITERIA))
def test_criterion(name, capsys):
    result = run_criterion(name, "full")
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.line()
