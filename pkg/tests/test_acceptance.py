"""Acceptance suite: every criterion at its stated tolerance, one line per check."""
import pytest

from scramble_lab.acceptance import CRITERIA


@pytest.mark.slow
@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    checks = CRITERIA[number]()
    assert checks, f"criterion {number} produced no checks"
    with capsys.disabled():
        print()
        for c in checks:
            print(c.line())
    failed = [c.line() for c in checks if not c.passed]
    assert not failed, "\n".join(failed)
