"""Matrix transpose by basis permutation.

A scheme pairs up the qubits of an even register and permutes basis states through those pairs.
Every scheme here is an involution with exactly N = 2^{n/2} fixed states, so laying the fixed
states on the diagonal of an N x N grid and each swapped pair on mirrored cells turns the
permutation into a matrix transpose.
"""

import logging
import math
import typing as t

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from qfilter.encoding import EncodedSignal, decode, layout_encode, register_size
from qfilter.exceptions import GateValidationError, LayoutError, SchemeError, ShapeMismatchError
from qfilter.schemas import BasisLayout, EncodingMode, SchemeKind
from qfilter.simulator import (
    Circuit,
    GateOp,
    StateVector,
    apply_circuit,
    cnot,
    discard_qubit,
    extend_register,
    swap,
    u3,
)

if t.TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray

logger = logging.getLogger(__name__)

ENABLE_PARAMS = (math.pi, 0.0, math.pi)
BYPASS_PARAMS = (0.0, 0.0, 0.0)


class TransposeScheme(BaseModel):
    """Qubit pairs of a transpose circuit and its on/off switch.

    C-NOT pairs are (control, target); swap pairs are the two swapped qubits. The controlled
    swap scheme is switched by an ancilla at index `n_qubits`, rotated by U3 into |1> or left in
    |0>. The other schemes are switched by leaving their gates out.
    """

    model_config = ConfigDict(frozen=True)

    kind: SchemeKind
    n_qubits: int
    pairs: tuple[tuple[int, int], ...]
    enabled: bool = True
    enable_ancilla: int | None = None

    @model_validator(mode="after")
    def check_pairs(self) -> TransposeScheme:
        """Validator to ensure the pairs are disjoint and inside the register."""
        qubits = [q for pair in self.pairs for q in pair]
        if len(set(qubits)) != len(qubits) or any(not 0 <= q < self.n_qubits for q in qubits):
            msg = f"Scheme pairs {self.pairs} must be disjoint and within {self.n_qubits} qubits."
            raise ValueError(msg)
        return self

    @property
    def side(self) -> int:
        """Side N of the matrices the scheme transposes."""
        return 2 ** (self.n_qubits // 2)

    @property
    def enable_params(self) -> tuple[float, float, float]:
        """U3 angles driving the enable ancilla."""
        return ENABLE_PARAMS if self.enabled else BYPASS_PARAMS

    def switched(self, *, enabled: bool) -> TransposeScheme:
        """The same scheme with the switch set."""
        return self.model_copy(update={"enabled": enabled})


def _check_even(n: int) -> None:
    if n < 2 or n % 2:  # noqa: PLR2004
        msg = f"Transpose schemes need an even number of qubits of at least 2, got {n}."
        raise SchemeError(msg)


def build_cnot_scheme(n: int, *, enabled: bool = True) -> TransposeScheme:
    """C-NOTs from each even qubit onto the odd qubit above it."""
    _check_even(n)
    pairs = tuple((2 * k, 2 * k + 1) for k in range(n // 2))
    return TransposeScheme(kind=SchemeKind.CNOT, n_qubits=n, pairs=pairs, enabled=enabled)


def build_cswap_scheme(n: int, *, enabled: bool = True) -> TransposeScheme:
    """Swaps of adjacent qubit pairs, all controlled by one enable ancilla."""
    _check_even(n)
    pairs = tuple((2 * k, 2 * k + 1) for k in range(n // 2))
    return TransposeScheme(kind=SchemeKind.CSWAP, n_qubits=n, pairs=pairs, enabled=enabled, enable_ancilla=n)


def build_rowmajor_scheme(n: int, *, enabled: bool = True) -> TransposeScheme:
    """Swap the low half of the register with the high half, so r * N + c becomes c * N + r."""
    _check_even(n)
    half = n // 2
    pairs = tuple((k, k + half) for k in range(half))
    return TransposeScheme(kind=SchemeKind.ROW_MAJOR, n_qubits=n, pairs=pairs, enabled=enabled)


def build_scheme(kind: SchemeKind, n: int, *, enabled: bool = True) -> TransposeScheme:
    """Build the scheme of the given kind."""
    builders = {
        SchemeKind.CNOT: build_cnot_scheme,
        SchemeKind.CSWAP: build_cswap_scheme,
        SchemeKind.ROW_MAJOR: build_rowmajor_scheme,
    }
    return builders[kind](n, enabled=enabled)


def scheme_circuit(scheme: TransposeScheme) -> Circuit:
    """Gates of the scheme, on `n_qubits` data qubits plus the enable ancilla if it has one."""
    ops: list[GateOp]
    match scheme.kind:
        case SchemeKind.CSWAP:
            ancilla = t.cast("int", scheme.enable_ancilla)
            ops = [u3(*scheme.enable_params, ancilla)]
            ops.extend(swap(a, b, [(ancilla, 1)]) for a, b in scheme.pairs)
        case SchemeKind.CNOT if scheme.enabled:
            ops = [cnot(control, target) for control, target in scheme.pairs]
        case SchemeKind.ROW_MAJOR if scheme.enabled:
            ops = [swap(a, b) for a, b in scheme.pairs]
        case _:
            ops = []
    return Circuit(ops)


def apply_scheme(state: StateVector, scheme: TransposeScheme) -> StateVector:
    """Run the scheme on a data register, attaching and then dropping the enable ancilla."""
    if state.n_qubits != scheme.n_qubits:
        msg = f"Scheme is for {scheme.n_qubits} qubits but the state has {state.n_qubits}."
        raise GateValidationError(msg)
    if scheme.enable_ancilla is None:
        return apply_circuit(state, scheme_circuit(scheme))
    extended = apply_circuit(extend_register(state), scheme_circuit(scheme))
    return discard_qubit(extended, scheme.enable_ancilla)


def basis_permutation(scheme: TransposeScheme) -> NDArray[np.int64]:
    """Image of every data basis index under the scheme, from bit arithmetic alone."""
    indices = np.arange(2**scheme.n_qubits, dtype=np.int64)
    image = indices.copy()
    if not scheme.enabled:
        return image
    for a, b in scheme.pairs:
        bit_a = (indices >> a) & 1
        bit_b = (indices >> b) & 1
        if scheme.kind is SchemeKind.CNOT:
            image ^= bit_a << b
        else:
            differs = bit_a ^ bit_b
            image ^= (differs << a) | (differs << b)
    return image


def _transpose_permutation(scheme: TransposeScheme) -> NDArray[np.int64]:
    permutation = basis_permutation(scheme.switched(enabled=True))
    if not np.array_equal(permutation[permutation], np.arange(permutation.size)):
        msg = f"The {scheme.kind} permutation is not an involution."
        raise LayoutError(msg)
    return permutation


def derive_layout(scheme: TransposeScheme) -> BasisLayout:
    """Canonical layout for a scheme.

    Fixed states go on the diagonal in increasing order. Swapped pairs, ordered by their smaller
    index, fill the strict upper triangle row by row, with each partner on the mirrored cell.

    Raises:
        LayoutError: If the permutation is not an involution with exactly N fixed states.
    """
    permutation = _transpose_permutation(scheme)
    side = scheme.side
    indices = np.arange(permutation.size)
    fixed = indices[permutation == indices]
    if fixed.size != side:
        msg = f"Expected {side} fixed states for a {side}x{side} layout, found {fixed.size}."
        raise LayoutError(msg)
    grid = np.zeros((side, side), dtype=np.int64)
    grid[np.diag_indices(side)] = fixed
    starts = indices[permutation > indices]
    rows, cols = np.triu_indices(side, k=1)
    grid[rows, cols] = starts
    grid[cols, rows] = permutation[starts]
    return BasisLayout.from_array(grid)


def validate_layout(layout: BasisLayout, scheme: TransposeScheme) -> None:
    """Check that the scheme fixes the diagonal and swaps every mirrored pair of cells.

    Raises:
        LayoutError: If the layout is the wrong size or the scheme does not transpose it.
    """
    if layout.n_qubits != scheme.n_qubits:
        msg = f"A {layout.side}x{layout.side} layout does not fit a {scheme.n_qubits}-qubit scheme."
        raise LayoutError(msg)
    grid = layout.as_array()
    permutation = _transpose_permutation(scheme)
    if not np.array_equal(permutation[grid], grid.T):
        rows, cols = np.nonzero(permutation[grid] != grid.T)
        msg = f"The {scheme.kind} scheme does not map cell ({rows[0]}, {cols[0]}) onto its mirror."
        raise LayoutError(msg)


def transposed_state(
    matrix: ArrayLike,
    scheme: TransposeScheme,
    layout: BasisLayout | None = None,
    mode: EncodingMode = EncodingMode.AMPLITUDE,
) -> tuple[EncodedSignal, StateVector]:
    """Encode a matrix under the layout and run the scheme on it."""
    layout = layout or derive_layout(scheme)
    validate_layout(layout, scheme)
    signal = layout_encode(matrix, layout, mode)
    logger.debug("Transposing %dx%d matrix with the %s scheme", layout.side, layout.side, scheme.kind)
    return signal, apply_scheme(signal.state(), scheme)


def transpose_matrix(
    matrix: ArrayLike,
    scheme: TransposeScheme,
    layout: BasisLayout | None = None,
    mode: EncodingMode = EncodingMode.AMPLITUDE,
) -> NDArray[np.float64]:
    """Transpose an N x N matrix by encoding, permuting and decoding under one layout.

    Args:
        matrix: Real square matrix, non-negative in probability mode.
        scheme: Transpose circuit to run.
        layout: Grid the matrix is encoded on. Defaults to `derive_layout(scheme)`.
        mode: How the entries become amplitudes.
    """
    signal, state = transposed_state(matrix, scheme, layout, mode)
    return decode(signal, state.amplitudes)


class CropInfo(BaseModel):
    """Where a padded matrix came from, to cut the transpose back out."""

    model_config = ConfigDict(frozen=True)

    rows: int
    cols: int
    side: int

    @property
    def n_qubits(self) -> int:
        """Register size of the padded matrix."""
        return 2 * (self.side.bit_length() - 1)

    def crop_transposed(self, result: NDArray[np.float64]) -> NDArray[np.float64]:
        """The cols x rows corner holding the transpose of the original matrix."""
        return result[: self.cols, : self.rows]


def pad_general(matrix: ArrayLike) -> tuple[NDArray[np.float64], CropInfo]:
    """Place an r x c matrix in the top-left corner of the smallest power-of-two square."""
    array = np.asarray(matrix, dtype=np.float64)
    if array.ndim != 2 or 0 in array.shape:  # noqa: PLR2004
        msg = f"Expected a non-empty matrix, got shape {array.shape}."
        raise ShapeMismatchError(msg)
    rows, cols = array.shape
    side = register_size(max(rows, cols))
    padded = np.zeros((side, side), dtype=np.float64)
    padded[:rows, :cols] = array
    return padded, CropInfo(rows=rows, cols=cols, side=side)
