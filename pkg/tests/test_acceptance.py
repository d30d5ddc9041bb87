"""The ten acceptance criteria, each at its stated time limit.

One pass/fail line per criterion is printed in the terminal summary (and
by ``python3 tests/acceptance.py``).
"""
import pytest

import acceptance

RESULTS: dict = {}
LINES: list = []


def _run(number: int):
    if number not in RESULTS:
        RESULTS[number] = acceptance.timed(number)
        LINES.append(RESULTS[number].line)
    return RESULTS[number]


@pytest.mark.parametrize("number", range(1, 10))
def test_criterion(number):
    run = _run(number)
    if not run.ok:
        pytest.fail(run.line, pytrace=False)


def test_criterion_10_determinism():
    first = {n: _run(n) for n in range(1, 10)}
    run = acceptance.criterion_10(first)
    LINES.append(run.line)
    if not run.ok:
        pytest.fail(run.line, pytrace=False)
