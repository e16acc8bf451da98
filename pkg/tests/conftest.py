import numpy as np
import pytest

from qcorr.povm_opt import OptConfig

ACCEPTANCE_LINES = []


@pytest.fixture
def fast_cfg():
    return OptConfig(restarts=6, seed=3)


@pytest.fixture
def acceptance_log():
    """Collects one summary line per acceptance criterion."""

    def record(number, passed, detail):
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def ket(*amps):
    v = np.asarray(amps, dtype=complex)
    return v / np.linalg.norm(v)
