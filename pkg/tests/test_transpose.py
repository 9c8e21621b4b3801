import numpy as np
import pytest
from pydantic import ValidationError

from qfilter.encoding import decode, encode_amplitude
from qfilter.exceptions import EncodingModeError, LayoutError, SchemeError
from qfilter.schemas import BasisLayout, EncodingMode, SchemeKind
from qfilter.simulator import apply_circuit, set_amplitudes
from qfilter.transpose import (
    BYPASS_PARAMS,
    ENABLE_PARAMS,
    TransposeScheme,
    apply_scheme,
    basis_permutation,
    build_cnot_scheme,
    build_cswap_scheme,
    build_rowmajor_scheme,
    build_scheme,
    derive_layout,
    pad_general,
    scheme_circuit,
    transpose_matrix,
    transposed_state,
    validate_layout,
)

LAYOUT_B = BasisLayout(((0, 1, 9, 4), (3, 2, 6, 5), (11, 14, 8, 13), (12, 15, 7, 10)))
LAYOUT_D = BasisLayout(((0, 1, 4, 6), (2, 3, 5, 7), (8, 10, 12, 13), (9, 11, 14, 15)))


class TestSchemes:
    def test_cnot_pairs(self):
        scheme = build_cnot_scheme(4)

        assert scheme.pairs == ((0, 1), (2, 3))
        assert scheme.side == 4

    def test_cnot_fixed_states(self):
        permutation = basis_permutation(build_cnot_scheme(4))

        fixed = np.flatnonzero(permutation == np.arange(16)).tolist()
        assert fixed == [0b0000, 0b0010, 0b1000, 0b1010]
        assert permutation[0b0001] == 0b0011

    def test_two_qubit_cnot(self):
        permutation = basis_permutation(build_cnot_scheme(2))

        assert permutation.tolist() == [0, 3, 2, 1]

    def test_rowmajor_swaps_row_and_column(self):
        permutation = basis_permutation(build_rowmajor_scheme(4))

        assert permutation[0b0001] == 0b0100
        assert all(permutation[r * 4 + r] == r * 4 + r for r in range(4))

    @pytest.mark.parametrize("kind", list(SchemeKind))
    @pytest.mark.parametrize("n", [2, 4, 6, 8])
    def test_permutation_is_involution(self, kind, n):
        permutation = basis_permutation(build_scheme(kind, n))

        np.testing.assert_array_equal(permutation[permutation], np.arange(2**n))
        assert np.count_nonzero(permutation == np.arange(2**n)) == 2 ** (n // 2)

    @pytest.mark.parametrize("kind", list(SchemeKind))
    @pytest.mark.parametrize("n", [2, 4, 6, 8])
    def test_circuit_matches_permutation(self, kind, n):
        scheme = build_scheme(kind, n)
        permutation = basis_permutation(scheme)
        amplitudes = np.arange(1, 2**n + 1, dtype=np.float64)
        state = set_amplitudes(amplitudes / np.linalg.norm(amplitudes))

        permuted = apply_scheme(state, scheme)

        expected = np.empty_like(state.amplitudes)
        expected[permutation] = state.amplitudes
        np.testing.assert_allclose(permuted.amplitudes, expected, atol=1e-12)

    @pytest.mark.parametrize("n", [0, 3])
    def test_odd_register(self, n):
        with pytest.raises(SchemeError):
            build_cswap_scheme(n)

    def test_pairs_must_be_disjoint(self):
        with pytest.raises(ValidationError, match="disjoint"):
            TransposeScheme.model_validate({"kind": "cnot", "n_qubits": 4, "pairs": [(0, 1), (1, 2)]})

    def test_cnot_uses_disjoint_two_qubit_gates(self):
        circuit = scheme_circuit(build_cnot_scheme(8))

        qubits = [q for op in circuit for q in op.qubits]
        assert all(op.arity == 2 for op in circuit)
        assert len(set(qubits)) == len(qubits)


class TestSwitch:
    def test_cswap_enable_gate(self):
        enabled = scheme_circuit(build_cswap_scheme(4))
        bypassed = scheme_circuit(build_cswap_scheme(4, enabled=False))

        assert enabled.root[0].params == ENABLE_PARAMS
        assert bypassed.root[0].params == BYPASS_PARAMS
        assert enabled.width() == 5

    def test_bypass_is_identity(self, random_state):
        state = random_state(4)
        for kind in SchemeKind:
            scheme = build_scheme(kind, 4, enabled=False)
            np.testing.assert_allclose(apply_scheme(state, scheme).amplitudes, state.amplitudes, atol=1e-12)

    def test_enabled_twice_is_identity(self, random_state):
        state = random_state(4)
        scheme = build_cswap_scheme(4)

        twice = apply_scheme(apply_scheme(state, scheme), scheme)

        np.testing.assert_allclose(twice.amplitudes, state.amplitudes, atol=1e-12)

    def test_enable_qubit_is_set(self, random_state):
        scheme = build_cswap_scheme(2)
        state = random_state(2)
        extended = set_amplitudes(np.concatenate([state.amplitudes, np.zeros(4)]))

        after = apply_circuit(extended, scheme_circuit(scheme))

        # The enable qubit stays in |1> until it is discarded.
        np.testing.assert_allclose(np.abs(after.amplitudes[:4]), 0, atol=1e-12)


class TestLayouts:
    def test_published_layouts_validate(self):
        validate_layout(LAYOUT_B, build_cnot_scheme(4))
        validate_layout(LAYOUT_D, build_cswap_scheme(4))

    def test_layout_for_wrong_scheme(self):
        with pytest.raises(LayoutError, match="mirror"):
            validate_layout(LAYOUT_B, build_cswap_scheme(4))

    def test_layout_for_wrong_size(self):
        with pytest.raises(LayoutError):
            validate_layout(LAYOUT_B, build_cnot_scheme(6))

    def test_row_major_layout_fits_rowmajor_scheme(self):
        validate_layout(BasisLayout.row_major(6), build_rowmajor_scheme(6))

    @pytest.mark.parametrize("kind", list(SchemeKind))
    @pytest.mark.parametrize("n", [2, 4, 6, 8])
    def test_derived_layout_is_valid(self, kind, n):
        scheme = build_scheme(kind, n)

        layout = derive_layout(scheme)

        validate_layout(layout, scheme)
        np.testing.assert_array_equal(np.diag(layout.as_array()), np.sort(np.diag(layout.as_array())))

    def test_derived_cnot_layout(self):
        assert derive_layout(build_cnot_scheme(4)).as_array()[0].tolist() == [0, 1, 4, 5]

    def test_layout_must_be_bijection(self):
        with pytest.raises(ValidationError, match="exactly once"):
            BasisLayout(((0, 1), (1, 3)))

    def test_layout_must_be_square(self):
        with pytest.raises(ValidationError, match="square"):
            BasisLayout(((0, 1, 2), (3, 4, 5), (6, 7, 8)))


class TestTransposeMatrix:
    @pytest.mark.parametrize("kind", list(SchemeKind))
    @pytest.mark.parametrize("n", [2, 4, 6, 8])
    def test_random_matrices(self, rng, kind, n):
        scheme = build_scheme(kind, n)
        for _ in range(100 if n <= 4 else 10):
            matrix = rng.normal(size=(scheme.side, scheme.side))
            np.testing.assert_allclose(transpose_matrix(matrix, scheme), matrix.T, atol=1e-9)

    def test_double_transpose(self, rng):
        scheme = build_cnot_scheme(6)
        matrix = rng.uniform(size=(8, 8))

        twice = transpose_matrix(transpose_matrix(matrix, scheme, mode=EncodingMode.PROBABILITY), scheme)

        np.testing.assert_allclose(twice, matrix, atol=1e-9)

    def test_symmetric_matrix_is_unchanged(self, rng):
        half = rng.normal(size=(4, 4))
        matrix = half + half.T

        np.testing.assert_allclose(transpose_matrix(matrix, build_cswap_scheme(4), LAYOUT_D), matrix, atol=1e-9)

    def test_probability_mode_rejects_negative(self):
        with pytest.raises(EncodingModeError):
            transpose_matrix(-np.ones((4, 4)), build_cnot_scheme(4), mode=EncodingMode.PROBABILITY)

    def test_cnot_probabilities(self, matrix_x):
        signal, state = transposed_state(matrix_x, build_cnot_scheme(4), LAYOUT_B, EncodingMode.PROBABILITY)

        assert signal.normalizer == 120
        np.testing.assert_allclose(state.probabilities()[:4], [0, 0.033489, 0.041616, 0.008281], atol=5e-3)
        np.testing.assert_allclose(decode(signal, state.amplitudes), matrix_x.T, atol=1e-9)

    def test_cswap_state(self, matrix_x):
        _, state = transposed_state(matrix_x, build_cswap_scheme(4), LAYOUT_D)

        np.testing.assert_allclose(state.amplitudes[:4].real, [0, 0.114, 0.028, 0.142], atol=5e-3)

    def test_rowmajor_on_flat_encoding(self, rng):
        matrix = rng.normal(size=(4, 4))
        signal = encode_amplitude(matrix)

        transposed = apply_scheme(signal.state(), build_rowmajor_scheme(4))

        np.testing.assert_allclose(decode(signal, transposed.amplitudes), matrix.T, atol=1e-9)


class TestPadding:
    def test_two_by_three(self):
        matrix = np.arange(6, dtype=np.float64).reshape(2, 3)

        padded, crop = pad_general(matrix)

        assert padded.shape == (4, 4)
        np.testing.assert_array_equal(padded[2:], 0)
        np.testing.assert_array_equal(padded[:, 3], 0)
        assert crop.n_qubits == 4

    def test_square_power_of_two_unchanged(self, matrix_x):
        padded, crop = pad_general(matrix_x)

        np.testing.assert_array_equal(padded, matrix_x)
        assert crop.side == 4

    def test_five_by_two(self, rng):
        matrix = rng.normal(size=(5, 2))

        padded, crop = pad_general(matrix)
        result = crop.crop_transposed(transpose_matrix(padded, build_rowmajor_scheme(crop.n_qubits)))

        assert padded.shape == (8, 8)
        np.testing.assert_allclose(result, matrix.T, atol=1e-9)
