import numpy as np
import pytest

from tensorring import TRTensor

ACCEPTANCE_LINES: list = []


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_tr(rng, shape, ranks) -> TRTensor:
    return TRTensor.random(shape, ranks, rng)


def rel_err(A, B) -> float:
    nb = np.linalg.norm(B)
    return float(np.linalg.norm(np.asarray(A) - np.asarray(B)) / (nb if nb > 0 else 1.0))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
