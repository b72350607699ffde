import math
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from relwave import HydrogenModel, RotorModel, gaussian_coefficients  # noqa: E402


@pytest.fixture
def rotor():
    return RotorModel(R=1000.0)


@pytest.fixture
def hydrogen():
    return HydrogenModel(j=0.5, l=1)


@pytest.fixture
def fig1_packet():
    return gaussian_coefficients(1, 0.271, math.pi)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
