import numpy as np
import pytest

from identent import antisymmetrize_product, schmidt_form, symmetrize_product
from identent.oracle import make_rng

SQ2 = np.sqrt(2.0)


def e(dim, i):
    v = np.zeros(dim, dtype=complex)
    v[i] = 1.0
    return v


def phase_distance(a, b):
    """min over global phases of ||a - e^{i t} b||_F."""
    a, b = np.asarray(a), np.asarray(b)
    overlap = np.vdot(b, a)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return float(np.linalg.norm(a - phase * b))


@pytest.fixture
def singlet():
    return antisymmetrize_product(e(2, 0), e(2, 1))


@pytest.fixture
def boson_08():
    return schmidt_form([np.sqrt(0.8), np.sqrt(0.2)])


@pytest.fixture
def boson_equal():
    return symmetrize_product(e(2, 0), e(2, 1))


@pytest.fixture
def rng():
    return make_rng(20240611)


ACCEPTANCE_REPORT = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_REPORT:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_REPORT:
            terminalreporter.write_line(line)
