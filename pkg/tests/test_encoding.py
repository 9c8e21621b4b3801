import math

import numpy as np
import pytest

from qfilter.encoding import (
    align_global_phase,
    decode,
    encode,
    encode_amplitude,
    encode_probability,
    flatten,
    layout_encode,
    max_residual_imaginary,
    register_size,
    synthesize_preparation_unitary,
    unflatten,
)
from qfilter.exceptions import (
    DegenerateInputError,
    EncodingModeError,
    LayoutError,
    ShapeMismatchError,
    SizeCapError,
    StateValidationError,
)
from qfilter.schemas import BasisLayout, EncodingMode


class TestAmplitudeEncoding:
    def test_normalises(self):
        signal = encode_amplitude([3, 4])

        np.testing.assert_allclose(signal.amplitudes, [0.6, 0.8])
        assert signal.normalizer == pytest.approx(5)
        assert signal.pad_count == 0
        assert signal.mode is EncodingMode.AMPLITUDE

    def test_pads_to_power_of_two(self):
        signal = encode_amplitude([1, 2, 3, 4, 5])

        assert signal.amplitudes.size == 8
        assert signal.pad_count == 3
        np.testing.assert_array_equal(signal.amplitudes[5:], 0)

    def test_single_value_uses_one_qubit(self):
        signal = encode_amplitude([2])

        assert signal.n_qubits == 1
        np.testing.assert_allclose(signal.amplitudes, [1, 0])

    def test_all_zero_input(self):
        with pytest.raises(DegenerateInputError):
            encode_amplitude([0, 0, 0])

    def test_state_is_normalised(self, walkthrough):
        assert encode_amplitude(walkthrough).state().norm() == pytest.approx(1)

    @pytest.mark.parametrize("shape", [(5,), (3, 5), (4, 2, 3)])
    def test_decode_recovers_values(self, rng, shape):
        values = rng.normal(size=shape)
        signal = encode_amplitude(values)

        np.testing.assert_allclose(decode(signal, signal.amplitudes), values, atol=1e-12)

    def test_decode_recovers_random_lengths(self, rng):
        for length in [1, *rng.integers(1, 1001, size=50).tolist()]:
            values = rng.normal(size=length)
            signal = encode_amplitude(values)

            np.testing.assert_allclose(decode(signal, signal.amplitudes), values, atol=1e-10)

    def test_decode_after_global_phase(self, rng):
        values = rng.normal(size=11)
        signal = encode_amplitude(values)

        decoded = decode(signal, signal.amplitudes * np.exp(-0.7j), align_phase=True)

        np.testing.assert_allclose(decoded, values, atol=1e-10)

    def test_non_finite_input(self):
        with pytest.raises(DegenerateInputError, match="infinite"):
            encode_amplitude([1, math.inf])

    def test_decode_checks_length(self):
        signal = encode_amplitude([1, 2, 3, 4])

        with pytest.raises(ShapeMismatchError):
            decode(signal, [1, 0])

    def test_strict_decode_rejects_imaginary(self):
        signal = encode_amplitude([1, 1])

        with pytest.raises(StateValidationError, match="imaginary"):
            decode(signal, [0.7, 0.7j], strict=True)
        assert max_residual_imaginary(signal, [0.7, 0.7j]) == pytest.approx(0.7)


class TestProbabilityEncoding:
    def test_square_roots(self):
        signal = encode_probability([1, 3])

        np.testing.assert_allclose(signal.amplitudes, [0.5, math.sqrt(0.75)])
        assert signal.normalizer == 4

    def test_negative_values(self):
        with pytest.raises(EncodingModeError):
            encode_probability([1, -1])

    def test_decode_recovers_values(self, rng):
        values = rng.uniform(size=(4, 4))
        signal = encode(values, EncodingMode.PROBABILITY)

        np.testing.assert_allclose(decode(signal, signal.amplitudes), values, atol=1e-12)

    def test_decode_recovers_random_lengths(self, rng):
        for length in [1, *rng.integers(1, 1001, size=50).tolist()]:
            values = rng.uniform(0.1, 10, size=length)
            signal = encode_probability(values)

            np.testing.assert_allclose(decode(signal, signal.amplitudes), values, atol=1e-10)

    def test_decode_ignores_global_phase(self, rng):
        values = rng.uniform(size=6)
        signal = encode_probability(values)

        for phase in (0.3, -1.2, math.pi):
            decoded = decode(signal, signal.amplitudes * np.exp(1j * phase))
            np.testing.assert_allclose(decoded, values, atol=1e-12)


class TestShapes:
    def test_rgb_is_plane_major(self, rng):
        cube = rng.normal(size=(2, 3, 3))

        flat, shape = flatten(cube)

        np.testing.assert_array_equal(flat[:6], cube[..., 0].ravel())
        np.testing.assert_array_equal(flat[6:12], cube[..., 1].ravel())
        np.testing.assert_array_equal(unflatten(flat, shape), cube)

    def test_unsupported_shape(self):
        with pytest.raises(ShapeMismatchError):
            flatten(np.ones((2, 2, 2)))

    @pytest.mark.parametrize(("count", "size"), [(1, 2), (2, 2), (3, 4), (16, 16), (17, 32)])
    def test_register_size(self, count, size):
        assert register_size(count) == size


@pytest.mark.parametrize("phase", [1e-12, -1e-12, 0.3, -0.3, 1.2, -1.2])
def test_align_global_phase(phase):
    vector = np.array([0.6, -0.8])

    aligned = align_global_phase(vector * np.exp(1j * phase))

    np.testing.assert_allclose(aligned, vector, atol=1e-12)


def test_align_phase_leaves_real_vectors():
    vector = np.array([0.6, -0.8])

    np.testing.assert_allclose(align_global_phase(vector), vector)


def test_synthesised_unitary_prepares_target(rng):
    for _ in range(100):
        n = int(rng.integers(1, 7))
        target = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
        target /= np.linalg.norm(target)

        unitary = synthesize_preparation_unitary(target)

        np.testing.assert_allclose(unitary[:, 0], target, atol=1e-10)
        np.testing.assert_allclose(unitary.conj().T @ unitary, np.eye(2**n), atol=1e-10)


def test_synthesis_limits():
    with pytest.raises(SizeCapError):
        synthesize_preparation_unitary(np.ones(8) / math.sqrt(8), max_qubits=2)
    with pytest.raises(StateValidationError):
        synthesize_preparation_unitary([1, 1])


def test_layout_encode_places_entries(matrix_x):
    layout = BasisLayout(((0, 1, 4, 6), (2, 3, 5, 7), (8, 10, 12, 13), (9, 11, 14, 15)))

    signal = layout_encode(matrix_x, layout, EncodingMode.AMPLITUDE)

    assert signal.normalizer == pytest.approx(math.sqrt(1240))
    assert signal.amplitudes[4] == pytest.approx(2 / math.sqrt(1240))
    np.testing.assert_allclose(decode(signal, signal.amplitudes), matrix_x, atol=1e-12)


def test_layout_encode_checks_size(matrix_x):
    with pytest.raises(LayoutError):
        layout_encode(matrix_x[:2, :2], BasisLayout.row_major(4), EncodingMode.AMPLITUDE)
