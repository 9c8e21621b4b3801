"""Dense state vectors and the gate, measurement and postselection semantics on them."""

import logging
import typing as t

import numpy as np

from qfilter import settings
from qfilter.exceptions import (
    CapacityError,
    GateValidationError,
    ImpossibleOutcomeError,
    SizeCapError,
    StateValidationError,
)
from qfilter.simulator.gates import Circuit, GateKind, GateOp

if t.TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray

logger = logging.getLogger(__name__)

type Outcome = t.Literal[0, 1]


class StateVector:
    """The 2^n complex amplitudes of an n-qubit register.

    Qubit ``q`` is bit ``q`` of the basis index, so ``q0`` is the least significant bit. The
    amplitude array is read-only; every operation returns a new state.
    """

    __slots__ = ("_amplitudes",)

    def __init__(self, amplitudes: NDArray[np.complex128]) -> None:
        """Take ownership of an amplitude array. Use `set_amplitudes` to validate caller data."""
        amplitudes.flags.writeable = False
        self._amplitudes = amplitudes

    @property
    def amplitudes(self) -> NDArray[np.complex128]:
        """Read-only view of the amplitudes in basis-index order."""
        return self._amplitudes

    @property
    def n_qubits(self) -> int:
        """Number of qubits in the register."""
        return int(self._amplitudes.size).bit_length() - 1

    @property
    def dimension(self) -> int:
        """Number of basis states, 2^n."""
        return int(self._amplitudes.size)

    def probabilities(self) -> NDArray[np.float64]:
        """Measurement probability of every basis state."""
        return np.abs(self._amplitudes) ** 2

    def norm(self) -> float:
        """Euclidean norm of the amplitude vector."""
        return float(np.linalg.norm(self._amplitudes))

    def copy_amplitudes(self) -> NDArray[np.complex128]:
        """A writable copy of the amplitudes."""
        return self._amplitudes.copy()

    def __len__(self) -> int:  # noqa: D105
        return self.dimension

    def __repr__(self) -> str:  # noqa: D105
        return f"StateVector(n_qubits={self.n_qubits}, amplitudes={self._amplitudes!r})"


def _check_register(n_qubits: int, max_qubits: int) -> None:
    if not 1 <= n_qubits <= max_qubits:
        msg = f"Register must have between 1 and {max_qubits} qubits, got {n_qubits}."
        raise CapacityError(msg)


def _check_qubit(state: StateVector, qubit: int) -> None:
    if not 0 <= qubit < state.n_qubits:
        msg = f"Qubit {qubit} is outside the {state.n_qubits}-qubit register."
        raise GateValidationError(msg)


def _check_norm(amplitudes: NDArray[np.complex128], expected: float) -> None:
    norm_sq = float(np.vdot(amplitudes, amplitudes).real)
    if not abs(norm_sq - expected) <= settings.STATE_NORM_TOLERANCE:
        msg = f"Operation changed the squared norm from {expected} to {norm_sq}."
        raise StateValidationError(msg)


def _norm_sq(state: StateVector) -> float:
    return float(np.vdot(state.amplitudes, state.amplitudes).real)


def new_state(n_qubits: int, *, max_qubits: int = settings.MAX_QUBITS) -> StateVector:
    """The all-zero basis state |0...0>."""
    _check_register(n_qubits, max_qubits)
    amplitudes = np.zeros(2**n_qubits, dtype=np.complex128)
    amplitudes[0] = 1
    return StateVector(amplitudes)


def set_amplitudes(values: ArrayLike, *, max_qubits: int = settings.MAX_QUBITS) -> StateVector:
    """Build a state holding exactly the given amplitudes.

    Raises:
        StateValidationError: If the length is not a power of two, a value is not finite or the norm is not 1.
        CapacityError: If the register would be empty or larger than `max_qubits`.
    """
    amplitudes = np.array(values, dtype=np.complex128).ravel()
    size = amplitudes.size
    if size == 0 or size & (size - 1):
        msg = f"Amplitude count must be a power of two, got {size}."
        raise StateValidationError(msg)
    _check_register(size.bit_length() - 1, max_qubits)
    if not np.isfinite(amplitudes).all():
        msg = "Amplitudes must be finite."
        raise StateValidationError(msg)
    norm_sq = float(np.vdot(amplitudes, amplitudes).real)
    if not abs(norm_sq - 1) <= settings.INPUT_NORM_TOLERANCE:
        msg = f"Amplitudes must have unit norm, got squared norm {norm_sq:.12g}."
        raise StateValidationError(msg)
    return StateVector(amplitudes)


def _local_axis(qubit: int, n_qubits: int, fixed: t.Sequence[int]) -> int:
    axis = n_qubits - 1 - qubit
    return axis - sum(1 for f in fixed if f < axis)


def _apply_inplace(amplitudes: NDArray[np.complex128], n_qubits: int, op: GateOp) -> None:
    # C-order reshape puts the most significant qubit on axis 0.
    tensor = amplitudes.reshape((2,) * n_qubits)
    index: list[int | slice] = [slice(None)] * n_qubits
    fixed: list[int] = []
    for control in op.controls:
        axis = n_qubits - 1 - control.qubit
        index[axis] = control.polarity
        fixed.append(axis)
    block = tensor[tuple(index)]

    if op.kind is GateKind.SWAP:
        assert op.partner is not None  # noqa: S101
        first = _local_axis(op.target, n_qubits, fixed)
        second = _local_axis(op.partner, n_qubits, fixed)
        block[...] = np.swapaxes(block, first, second).copy()
        return

    axis = _local_axis(op.target, n_qubits, fixed)
    lower: list[int | slice] = [slice(None)] * block.ndim
    upper: list[int | slice] = [slice(None)] * block.ndim
    lower[axis], upper[axis] = 0, 1
    zero = block[tuple(lower)].copy()
    one = block[tuple(upper)].copy()
    matrix = op.matrix()
    block[tuple(lower)] = matrix[0, 0] * zero + matrix[0, 1] * one
    block[tuple(upper)] = matrix[1, 0] * zero + matrix[1, 1] * one


def _validate_op(op: GateOp, n_qubits: int) -> None:
    outside = [q for q in op.qubits if q >= n_qubits]
    if outside:
        msg = f"Gate {op.kind} uses qubits {outside} outside the {n_qubits}-qubit register."
        raise GateValidationError(msg)


def apply_gate(state: StateVector, op: GateOp) -> StateVector:
    """Apply one gate, returning the new state."""
    _validate_op(op, state.n_qubits)
    amplitudes = state.copy_amplitudes()
    _apply_inplace(amplitudes, state.n_qubits, op)
    _check_norm(amplitudes, _norm_sq(state))
    return StateVector(amplitudes)


def apply_circuit(state: StateVector, circuit: t.Iterable[GateOp]) -> StateVector:
    """Apply gates in order. Equivalent to folding `apply_gate` over the circuit."""
    ops = list(circuit)
    for op in ops:
        _validate_op(op, state.n_qubits)
    amplitudes = state.copy_amplitudes()
    for op in ops:
        _apply_inplace(amplitudes, state.n_qubits, op)
    _check_norm(amplitudes, _norm_sq(state))
    return StateVector(amplitudes)


def circuit_unitary(
    circuit: Circuit, n_qubits: int, *, max_qubits: int = settings.MAX_DENSE_QUBITS
) -> NDArray[np.complex128]:
    """Dense unitary of a circuit, built column by column from basis states."""
    if n_qubits > max_qubits:
        msg = f"Dense unitary of {n_qubits} qubits exceeds the {max_qubits}-qubit cap."
        raise SizeCapError(msg)
    for op in circuit:
        _validate_op(op, n_qubits)
    dimension = 2**n_qubits
    unitary = np.eye(dimension, dtype=np.complex128)
    for column in range(dimension):
        amplitudes = unitary[:, column].copy()
        for op in circuit:
            _apply_inplace(amplitudes, n_qubits, op)
        unitary[:, column] = amplitudes
    return unitary


def _branch_mask(n_qubits: int, qubit: int, outcome: int) -> NDArray[np.bool_]:
    indices = np.arange(2**n_qubits)
    return ((indices >> qubit) & 1) == outcome


def branch_probability(state: StateVector, qubit: int, outcome: Outcome) -> float:
    """Probability that measuring `qubit` gives `outcome`."""
    _check_qubit(state, qubit)
    mask = _branch_mask(state.n_qubits, qubit, outcome)
    return float(np.sum(state.probabilities()[mask]))


def postselect(state: StateVector, qubit: int, outcome: Outcome) -> tuple[StateVector, float]:
    """Project onto `qubit == outcome` and renormalise.

    Surviving amplitudes are divided by a positive real, so their relative phases are unchanged.

    Returns:
        The collapsed state and the probability of the outcome.
    """
    probability = branch_probability(state, qubit, outcome)
    if probability <= settings.ZERO_PROBABILITY_TOLERANCE:
        msg = f"Qubit {qubit} has zero probability of outcome {outcome}."
        raise ImpossibleOutcomeError(msg)
    amplitudes = state.copy_amplitudes()
    amplitudes[~_branch_mask(state.n_qubits, qubit, outcome)] = 0
    amplitudes /= np.sqrt(probability)
    _check_norm(amplitudes, 1.0)
    logger.debug("Postselected qubit %d on %d with probability %.6f", qubit, outcome, probability)
    return StateVector(amplitudes), probability


def sample_measurement(state: StateVector, qubit: int, rng: np.random.Generator) -> tuple[Outcome, StateVector]:
    """Measure one qubit, drawing the outcome from `rng`, and collapse the state."""
    probability_one = branch_probability(state, qubit, 1)
    outcome: Outcome = 1 if rng.random() < probability_one else 0
    collapsed, _ = postselect(state, qubit, outcome)
    return outcome, collapsed


def sample_counts(state: StateVector, shots: int, rng: np.random.Generator) -> dict[int, int]:
    """Measure the whole register `shots` times and histogram the basis outcomes."""
    probabilities = state.probabilities()
    outcomes = rng.choice(state.dimension, size=shots, p=probabilities / probabilities.sum())
    values, counts = np.unique(outcomes, return_counts=True)
    return {int(v): int(c) for v, c in zip(values, counts, strict=True)}


def extend_register(state: StateVector, extra: int = 1, *, max_qubits: int = settings.MAX_QUBITS) -> StateVector:
    """Append `extra` qubits in |0> above the existing ones."""
    _check_register(state.n_qubits + extra, max_qubits)
    amplitudes = np.zeros(state.dimension * 2**extra, dtype=np.complex128)
    amplitudes[: state.dimension] = state.amplitudes
    return StateVector(amplitudes)


def discard_qubit(state: StateVector, qubit: int) -> StateVector:
    """Remove a qubit that is in a definite basis state; higher qubits shift down by one.

    Raises:
        StateValidationError: If the qubit is entangled or in superposition.
    """
    _check_qubit(state, qubit)
    if state.n_qubits == 1:
        msg = "Cannot discard the only qubit of a register."
        raise CapacityError(msg)
    probability_one = branch_probability(state, qubit, 1)
    if not min(probability_one, 1 - probability_one) <= settings.STATE_NORM_TOLERANCE:
        msg = f"Qubit {qubit} is not in a definite state (P(1) = {probability_one:.6g})."
        raise StateValidationError(msg)
    outcome = round(probability_one)
    tensor = state.amplitudes.reshape((2,) * state.n_qubits)
    reduced = np.take(tensor, outcome, axis=state.n_qubits - 1 - qubit).ravel()
    return StateVector(np.ascontiguousarray(reduced, dtype=np.complex128))
