import numpy as np
import pytest

from catgen.opo import OpoParams


@pytest.fixture
def fig5_params():
    return OpoParams.from_ratio(0.27)


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


np.set_printoptions(precision=12)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report():
    """Record a one-line verdict for the acceptance summary."""

    def _report(number: int, ok: bool, detail: str):
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
