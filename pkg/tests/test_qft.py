import math

import numpy as np
import pytest

from qfilter import classical
from qfilter.encoding import encode_amplitude
from qfilter.exceptions import GateValidationError, SizeCapError
from qfilter.qft import Direction, apply_fourier, build_fourier, build_iqft, build_qft, dft_matrix_oracle
from qfilter.simulator import apply_circuit, circuit_unitary


@pytest.mark.parametrize("n", range(1, 9))
@pytest.mark.parametrize("direction", list(Direction))
def test_circuit_matches_matrix(n, direction):
    circuit = build_fourier(n, direction)

    np.testing.assert_allclose(circuit_unitary(circuit.ops, n), dft_matrix_oracle(n, direction), atol=1e-10)


@pytest.mark.parametrize("n", range(1, 9))
def test_oracle_is_unitary(n):
    matrix = dft_matrix_oracle(n, Direction.FORWARD)

    np.testing.assert_allclose(matrix @ matrix.conj().T, np.eye(2**n), atol=1e-10)


@pytest.mark.parametrize("n", range(1, 11))
def test_gate_count(n):
    counts = build_qft(n).ops.counts()

    assert counts["h"] == n
    assert counts["c1-p"] == n * (n - 1) // 2
    assert counts["swap"] == n // 2
    assert len(build_qft(n).ops) == n * (n + 1) // 2 + n // 2


def test_random_state_against_oracle(random_state):
    state = random_state(6)

    for direction in Direction:
        expected = dft_matrix_oracle(6, direction) @ state.amplitudes
        np.testing.assert_allclose(apply_fourier(state, direction).amplitudes, expected, atol=1e-10)


def test_iqft_undoes_qft(random_state):
    state = random_state(5)

    restored = apply_fourier(apply_fourier(state, Direction.FORWARD), Direction.INVERSE)

    np.testing.assert_allclose(restored.amplitudes, state.amplitudes, atol=1e-10)


def test_iqft_is_inverse_circuit():
    forward = build_qft(4)
    inverse = build_iqft(4)

    assert inverse.direction is Direction.INVERSE
    assert list(inverse.ops) == list(forward.ops.inverse())


def test_transform_on_sub_register():
    circuit = build_qft(2, (0, 1))

    expected = np.kron(np.eye(2), dft_matrix_oracle(2, Direction.FORWARD))

    np.testing.assert_allclose(circuit_unitary(circuit.ops, 3), expected, atol=1e-12)


def test_walkthrough_frequency_state(walkthrough):
    state = apply_fourier(encode_amplitude(walkthrough).state(), Direction.INVERSE)

    assert state.amplitudes[0] == pytest.approx(0.5)
    assert state.amplitudes[1] == pytest.approx(-0.444 - 0.088j, abs=5e-3)
    assert state.amplitudes[4] == pytest.approx(0, abs=1e-12)


def test_iqft_is_scaled_dft(rng):
    values = rng.normal(size=32)
    signal = encode_amplitude(values)

    frequency = apply_circuit(signal.state(), build_iqft(5).ops).amplitudes

    np.testing.assert_allclose(frequency * math.sqrt(32) * signal.normalizer, classical.dft(values), atol=1e-9)


def test_direction_flipped():
    assert Direction.FORWARD.flipped() is Direction.INVERSE
    assert Direction.INVERSE.flipped() is Direction.FORWARD


def test_invalid_sizes():
    with pytest.raises(GateValidationError):
        build_qft(0)
    with pytest.raises(GateValidationError):
        build_qft(3, (0, 1))
    with pytest.raises(SizeCapError):
        dft_matrix_oracle(13, Direction.FORWARD)
