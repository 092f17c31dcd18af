"""One PASS/FAIL line per acceptance criterion.

Run under pytest (lines are printed even without ``-s``) or directly with
``python tests/test_acceptance.py``.
"""
import sys

import pytest

from richardson_spectrum import acceptance


@pytest.mark.parametrize("criterion", acceptance.ALL, ids=[f.__name__ for f in acceptance.ALL])
def test_criterion(criterion, capsys):
    result = criterion()
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.line()


if __name__ == "__main__":
    results = acceptance.run_all(echo=print)
    sys.exit(0 if all(r.passed for r in results) else 1)
