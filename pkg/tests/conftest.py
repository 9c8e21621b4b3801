import numpy as np
import pytest

from qfilter.io import write_csv, write_netpbm
from qfilter.simulator import StateVector

WALKTHROUGH = [0, 0, 0, 0, 0, 0, 0.5, 0.5, 0.5, 0.5, 0, 0, 0, 0, 0, 0]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def random_state(rng):
    """Factory for random normalised states drawn from the shared generator."""

    def make(n_qubits: int) -> StateVector:
        amplitudes = rng.normal(size=2**n_qubits) + 1j * rng.normal(size=2**n_qubits)
        return StateVector(amplitudes / np.linalg.norm(amplitudes))

    return make


@pytest.fixture
def walkthrough():
    return np.array(WALKTHROUGH, dtype=np.float64)


@pytest.fixture
def matrix_x():
    return np.arange(16, dtype=np.float64).reshape(4, 4)


@pytest.fixture
def signal_csv(tmp_path, walkthrough):
    """The walkthrough signal written one value per line."""
    path = tmp_path / "signal.csv"
    write_csv(path, walkthrough)
    return path


@pytest.fixture
def gradient_pgm(tmp_path):
    """An 8x8 horizontal gradient as binary PGM."""
    path = tmp_path / "gradient.pgm"
    pixels = np.tile(np.arange(8, dtype=np.int64) * 32, (8, 1))
    write_netpbm(path, pixels, 255)
    return path


@pytest.fixture
def matrix_csv(tmp_path):
    path = tmp_path / "matrix.csv"
    write_csv(path, np.arange(6, dtype=np.float64).reshape(2, 3))
    return path
