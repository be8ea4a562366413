"""Runs every acceptance criterion and prints one PASS/FAIL line per criterion."""

import pytest

from foamcalc.acceptance import CRITERIA, run_one


@pytest.mark.parametrize("index", range(len(CRITERIA)), ids=[name for name, _ in CRITERIA])
def test_criterion(index, capsys):
    name, ok, detail, secs = run_one(index)
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {name} ({secs:.1f}s) {detail}")
    assert ok, detail
