import numpy as np
import pytest


_REPORT = []


class FixedRng:
    """Stand-in for RngStream that replays preset draws."""

    def __init__(self, bits=(), angles=()):
        self._bits = list(bits)
        self._angles = list(angles)

    def bit(self):
        return self._bits.pop(0)

    def angle(self):
        return self._angles.pop(0)

    def angles(self, n):
        out, self._angles = self._angles[:n], self._angles[n:]
        return np.array(out, dtype=np.float64)


@pytest.fixture
def fixed_rng():
    return FixedRng


@pytest.fixture(scope="session")
def acceptance_report():
    return _REPORT


def pytest_terminal_summary(terminalreporter):
    if _REPORT:
        terminalreporter.section("acceptance criteria")
        for line in _REPORT:
            terminalreporter.write_line(line)
