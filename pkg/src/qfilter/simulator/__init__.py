"""Dense state-vector simulation."""

from qfilter.simulator.gates import (
    Circuit,
    Control,
    GateKind,
    GateOp,
    cnot,
    hadamard,
    pauli_x,
    phase,
    swap,
    u3,
)
from qfilter.simulator.state import (
    Outcome,
    StateVector,
    apply_circuit,
    apply_gate,
    branch_probability,
    circuit_unitary,
    discard_qubit,
    extend_register,
    new_state,
    postselect,
    sample_counts,
    sample_measurement,
    set_amplitudes,
)

__all__ = [
    "Circuit",
    "Control",
    "GateKind",
    "GateOp",
    "Outcome",
    "StateVector",
    "apply_circuit",
    "apply_gate",
    "branch_probability",
    "circuit_unitary",
    "cnot",
    "discard_qubit",
    "extend_register",
    "hadamard",
    "new_state",
    "pauli_x",
    "phase",
    "postselect",
    "sample_counts",
    "sample_measurement",
    "set_amplitudes",
    "swap",
    "u3",
]
