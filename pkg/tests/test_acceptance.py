"""One line per acceptance criterion, printed as PASS/FAIL with its measured detail."""
import pytest

from csa.acceptance import CRITERIA


@pytest.mark.parametrize("name,fn", CRITERIA, ids=[n.split()[0] for n, _ in CRITERIA])
def test_criterion(name, fn, capsys):
    passed, detail = fn()
    with capsys.disabled():
        print(f"\n{'PASS' if passed else 'FAIL'} criterion {name}: {detail}")
    assert passed, detail
