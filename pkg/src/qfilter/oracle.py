"""Ancilla-marking filter oracle, postselection and the named filter families.

Marked frequency basis states flip an ancilla appended above the data register. Measuring the
ancilla then keeps either the marked or the unmarked branch, renormalised with relative phases
unchanged.
"""

import logging
import typing as t
from enum import StrEnum

import numpy as np
from pydantic import BaseModel, ConfigDict

from qfilter.exceptions import (
    AnnihilationError,
    DegenerateSpecError,
    FilterRangeError,
    GateValidationError,
    ImpossibleOutcomeError,
    RetryBudgetError,
)
from qfilter.schemas import FilterKind, FilterSpec, PrefixPattern
from qfilter.simulator import (
    Circuit,
    GateOp,
    Outcome,
    StateVector,
    apply_circuit,
    discard_qubit,
    extend_register,
    pauli_x,
    postselect,
    sample_measurement,
)

logger = logging.getLogger(__name__)

DEFAULT_CUTOFF = 2
DEFAULT_BAND_STOP = (2, 3)


class Emission(StrEnum):
    NATIVE = "native"
    TOFFOLI = "toffoli"


class MarkingCircuit(BaseModel):
    """Gates flipping the ancilla exactly on the marked data basis states.

    Data qubits are 0..n-1, the marker ancilla is n and any work ancillas follow it.
    """

    model_config = ConfigDict(frozen=True)

    ops: Circuit
    n_data_qubits: int
    ancilla_index: int
    emission: Emission
    work_ancillas: tuple[int, ...] = ()
    patterns: tuple[PrefixPattern, ...]

    @property
    def total_qubits(self) -> int:
        """Register size the circuit runs on."""
        return self.n_data_qubits + 1 + len(self.work_ancillas)


class GateCounts(BaseModel):
    multi_controlled_x: int = 0
    cnot: int = 0
    x: int = 0
    toffoli: int = 0
    uncompute_toffoli: int = 0
    work_ancillas: int = 0


def _x_sandwich(pattern: PrefixPattern) -> list[GateOp]:
    return [pauli_x(c.qubit) for c in pattern.constraints if c.bit == 0]


def _toffoli(first: int, second: int, target: int) -> GateOp:
    return pauli_x(target, [(first, 1), (second, 1)])


def _decomposed(pattern: PrefixPattern, ancilla: int, work: t.Sequence[int]) -> list[GateOp]:
    """Zero-controls become X conjugations and k >= 3 controls a Toffoli chain over k - 2 work qubits."""
    controls = [c.qubit for c in pattern.constraints]
    sandwich = _x_sandwich(pattern)
    if len(controls) <= 2:  # noqa: PLR2004
        core = [pauli_x(ancilla, [(q, 1) for q in controls])]
    else:
        compute = [_toffoli(controls[0], controls[1], work[0])]
        compute.extend(_toffoli(controls[i], work[i - 2], work[i - 1]) for i in range(2, len(controls) - 1))
        core = [*compute, _toffoli(controls[-1], work[len(controls) - 3], ancilla), *reversed(compute)]
    return [*sandwich, *core, *sandwich]


def compile_marking(spec: FilterSpec, emission: Emission = Emission.NATIVE) -> MarkingCircuit:
    """Compile the spec into one multi-controlled X on the ancilla per marked pattern.

    A pattern's bits become control polarities; in Toffoli emission they become X conjugations
    around 1-controls instead.

    Raises:
        DegenerateSpecError: If nothing or everything is marked.
    """
    marked = spec.marked_count()
    if marked in {0, spec.dimension}:
        msg = f"Filter marks {marked} of {spec.dimension} states; postselection would annihilate or do nothing."
        raise DegenerateSpecError(msg)
    patterns = tuple(spec.patterns())
    ancilla = spec.n_data_qubits
    if emission is Emission.NATIVE:
        ops = [pauli_x(ancilla, [(c.qubit, c.bit) for c in p.constraints]) for p in patterns]
        work: tuple[int, ...] = ()
    else:
        work_count = max(0, max(len(p.constraints) for p in patterns) - 2)
        work = tuple(range(ancilla + 1, ancilla + 1 + work_count))
        ops = [op for p in patterns for op in _decomposed(p, ancilla, work)]
    logger.debug("Compiled %d patterns marking %d states into %d gates", len(patterns), marked, len(ops))
    return MarkingCircuit(
        ops=Circuit(ops),
        n_data_qubits=spec.n_data_qubits,
        ancilla_index=ancilla,
        emission=emission,
        work_ancillas=work,
        patterns=patterns,
    )


def gate_count(circuit: MarkingCircuit, emission: Emission | None = None) -> GateCounts:
    """Gate cost of the marking circuit when emitted natively or as Toffolis.

    A k-controlled X costs k - 1 Toffolis and k - 2 work ancillas, plus k - 2 Toffolis to
    uncompute the work ancillas. One and two controls need no work ancilla.
    """
    emission = emission or circuit.emission
    counts = GateCounts()
    for pattern in circuit.patterns:
        controls = len(pattern.constraints)
        zeros = sum(1 for c in pattern.constraints if c.bit == 0)
        if emission is Emission.NATIVE:
            if controls == 1:
                counts.cnot += 1
            else:
                counts.multi_controlled_x += 1
            continue
        counts.x += 2 * zeros
        if controls == 1:
            counts.cnot += 1
        else:
            counts.toffoli += controls - 1
            counts.uncompute_toffoli += max(0, controls - 2)
            counts.work_ancillas = max(counts.work_ancillas, controls - 2)
    return counts


def _check_register(state: StateVector, spec: FilterSpec) -> None:
    if state.n_qubits != spec.n_data_qubits:
        msg = f"Filter is for {spec.n_data_qubits} qubits but the state has {state.n_qubits}."
        raise GateValidationError(msg)


def _marked_state(state: StateVector, marking: MarkingCircuit) -> StateVector:
    extended = extend_register(state, 1 + len(marking.work_ancillas))
    return apply_circuit(extended, marking.ops)


def _drop_ancillas(state: StateVector, marking: MarkingCircuit) -> StateVector:
    for qubit in reversed((marking.ancilla_index, *marking.work_ancillas)):
        state = discard_qubit(state, qubit)
    return state


def _kept_outcome(spec: FilterSpec) -> Outcome:
    return 1 if spec.keep_marked else 0


def apply_filter_project(
    state: StateVector, spec: FilterSpec, emission: Emission = Emission.NATIVE
) -> tuple[StateVector, float]:
    """Mark, postselect the kept branch and drop the ancilla.

    Returns:
        The filtered data state and the probability of the kept branch.

    Raises:
        AnnihilationError: If the kept branch has zero probability.
    """
    _check_register(state, spec)
    marking = compile_marking(spec, emission)
    try:
        collapsed, probability = postselect(
            _marked_state(state, marking), marking.ancilla_index, _kept_outcome(spec)
        )
    except ImpossibleOutcomeError:
        raise AnnihilationError from None
    logger.info("Postselection kept branch %d with probability %.6f", _kept_outcome(spec), probability)
    return _drop_ancillas(collapsed, marking), probability


def apply_filter_sampled(
    state: StateVector,
    spec: FilterSpec,
    rng: np.random.Generator,
    max_trials: int,
    emission: Emission = Emission.NATIVE,
) -> tuple[StateVector, int]:
    """Repeat preparation, marking and ancilla measurement until the kept outcome appears.

    Every trial measures a freshly prepared copy of the marked state, since a failed
    measurement destroys the branch we wanted.

    Returns:
        The filtered data state and the number of trials used.

    Raises:
        RetryBudgetError: If `max_trials` measurements all gave the wrong outcome.
    """
    _check_register(state, spec)
    marking = compile_marking(spec, emission)
    prepared = _marked_state(state, marking)
    kept = _kept_outcome(spec)
    for trial in range(1, max_trials + 1):
        outcome, collapsed = sample_measurement(prepared, marking.ancilla_index, rng)
        if outcome == kept:
            logger.info("Postselection succeeded after %d trial(s)", trial)
            return _drop_ancillas(collapsed, marking), trial
    msg = f"No kept outcome in {max_trials} trials."
    raise RetryBudgetError(msg)


def _mirror(indices: t.Iterable[int], dimension: int) -> frozenset[int]:
    return frozenset(k % dimension for i in indices for k in (i, -i))


def _band(band: tuple[int, int] | None, default: tuple[int, int], half: int) -> tuple[int, int]:
    low, high = band or default
    if not 1 <= low <= high <= half:
        msg = f"Band edges must satisfy 1 <= low <= high <= {half}, got ({low}, {high})."
        raise FilterRangeError(msg)
    return low, high


def named_filter(
    kind: FilterKind, n: int, *, cutoff: int | None = None, band: tuple[int, int] | None = None
) -> FilterSpec:
    """Build one of the four basic filters on an n-qubit spectrum.

    Frequency k and N - k are the same physical frequency, so every marked set is symmetric.

    * low/high pass mark the `cutoff` lowest frequencies {0..c-1} and {N-c+1..N-1}; low pass
      keeps the marked branch, high pass the other one.
    * band pass marks everything outside the band {low..high} and its mirror image.
    * band stop marks the band {low..high} and its mirror image.

    Defaults reproduce the worked 4-qubit examples: cutoff 2, pass band (2, N/2 - 2) and stop
    band (2, 3).

    Raises:
        FilterRangeError: If the edges do not fit the register.
    """
    dimension = 2**n
    half = dimension // 2
    match kind:
        case FilterKind.LOW_PASS | FilterKind.HIGH_PASS:
            c = DEFAULT_CUTOFF if cutoff is None else cutoff
            if not 1 <= c <= half:
                msg = f"Cutoff must be between 1 and {half}, got {c}."
                raise FilterRangeError(msg)
            marked = _mirror(range(c), dimension)
            return FilterSpec(n=n, marked=marked, keep_marked=kind is FilterKind.LOW_PASS)
        case FilterKind.BAND_PASS:
            low, high = _band(band, (DEFAULT_CUTOFF, half - DEFAULT_CUTOFF), half)
            passed = _mirror(range(low, high + 1), dimension)
            return FilterSpec(n=n, marked=frozenset(range(dimension)) - passed, keep_marked=False)
        case FilterKind.BAND_STOP:
            low, high = _band(band, DEFAULT_BAND_STOP, half)
            return FilterSpec(n=n, marked=_mirror(range(low, high + 1), dimension), keep_marked=False)
        case FilterKind.CUSTOM:
            msg = "A custom filter has no named geometry; give marked indices or prefixes."
            raise FilterRangeError(msg)


def named_filter_2d(kind: FilterKind, m: int, *, cutoff: int | None = None) -> FilterSpec:
    """Square low or high pass on a 2-D spectrum stored row-major on 2m qubits.

    Marks the states kr * N + kc whose row and column frequencies are both among the `cutoff`
    lowest, with N = 2^m.
    """
    if kind not in {FilterKind.LOW_PASS, FilterKind.HIGH_PASS}:
        msg = f"Two-dimensional filtering supports low and high pass, not {kind}."
        raise FilterRangeError(msg)
    row = named_filter(kind, m, cutoff=cutoff)
    side = 2**m
    marked = frozenset(r * side + c for r in row.marked_indices for c in row.marked_indices)
    return FilterSpec(n=2 * m, marked=marked, keep_marked=row.keep_marked)


def prefix_filter(n: int, prefixes: t.Sequence[str], *, keep_marked: bool) -> FilterSpec:
    """Filter marking every state that matches one of the ket-notation prefixes."""
    return FilterSpec.model_validate({"n": n, "prefixes": list(prefixes), "keep_marked": keep_marked})

