"""Acceptance battery: each criterion prints its one-line verdict and must pass."""

import pytest

from tailgf.acceptance import CRITERION_NAMES, run_criterion


@pytest.mark.parametrize("number", sorted(CRITERION_NAMES))
def test_criterion(number, capsys):
    result = run_criterion(number)
    with capsys.disabled():
        print(result.line())
    assert result.passed, result.details
