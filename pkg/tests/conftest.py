import numpy as np
import pytest

from minscramble.algebra import bipartite_algebra, collective_spin_algebra, masa
from minscramble.operators import haar_unitary


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture(scope="session")
def spin3():
    A = collective_spin_algebra(3)
    A.commutant()
    A.blocks()
    return A


@pytest.fixture(scope="session")
def qubit_pair():
    return bipartite_algebra(2, 2, "A")


@pytest.fixture(scope="session")
def masa4():
    return masa(4, haar_unitary(4, 7))


def realign(U, dA, dB):
    """Operator-Schmidt realignment U[(a b),(a' b')] -> R[(a a'),(b b')]."""
    return U.reshape(dA, dB, dA, dB).transpose(0, 2, 1, 3).reshape(dA * dA, dB * dB)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
