import numpy as np
import pytest


# The two qutrit pairs whose ranges show a cusp and a flat face.
CUSP_H0 = np.array([[0, 1, 0], [1, 0, 0], [0, 0, -2]], dtype=float)
CUSP_H1 = np.diag([1.0, -1.0, 0.0])
FLAT_H0 = np.diag([0.0, 0.0, 1.0])
FLAT_H1 = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=float)

# Variance-sum examples: one with a common eigenvector, one with c = 15/32.
TRIVIAL_X = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]], dtype=float)
TRIVIAL_Y = np.diag([1.0, 0.0, -1.0])
MP_X = np.array([[0, 1, 0], [1, 0, 1j], [0, -1j, 0]])
MP_Y = np.diag([1.0, 0.0, -1.0])
MP_BOUND = 15 / 32


@pytest.fixture
def cusp_pair():
    return CUSP_H0, CUSP_H1


@pytest.fixture
def flat_pair():
    return FLAT_H0, FLAT_H1


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = []


def record(number, ok, detail):
    """Log one acceptance criterion; the summary hook prints the lines."""
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
