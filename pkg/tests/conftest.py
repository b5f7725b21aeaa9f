import numpy as np
import pytest

from causalprobe.quantum import Rng


@pytest.fixture
def rng():
    return Rng(1234)


def rand_herm(d, gen):
    a = gen.standard_normal((d, d)) + 1j * gen.standard_normal((d, d))
    return (a + a.conj().T) / 2


ACCEPTANCE_LINES: dict = {}


@pytest.fixture
def acceptance():
    """Record one verdict per acceptance criterion; printed in the terminal summary."""
    def record(k, passed, detail):
        prev = ACCEPTANCE_LINES.get(k)
        ok = passed and (prev is None or prev[0])
        ACCEPTANCE_LINES[k] = (ok, detail if not passed or prev is None else prev[1])
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        ok, detail = ACCEPTANCE_LINES[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
