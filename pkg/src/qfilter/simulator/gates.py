"""Gate operations understood by the state-vector simulator."""

import cmath
import math
import typing as t
from collections import Counter
from enum import StrEnum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, RootModel, model_validator

if t.TYPE_CHECKING:
    from numpy.typing import NDArray


class GateKind(StrEnum):
    HADAMARD = "h"
    PAULI_X = "x"
    PHASE = "p"
    U3 = "u3"
    SWAP = "swap"


_PARAM_COUNT: dict[GateKind, int] = {
    GateKind.HADAMARD: 0,
    GateKind.PAULI_X: 0,
    GateKind.PHASE: 1,
    GateKind.U3: 3,
    GateKind.SWAP: 0,
}

_SQRT_HALF = 1 / math.sqrt(2)


class Control(BaseModel):
    """A control qubit, firing when the qubit equals `polarity`."""

    model_config = ConfigDict(frozen=True)

    qubit: int = Field(ge=0)
    polarity: t.Literal[0, 1] = 1


type ControlLike = Control | tuple[int, int]


class GateOp(BaseModel):
    """A single, possibly controlled, gate application.

    `partner` is the second qubit of a swap and is `None` for every other kind.
    """

    model_config = ConfigDict(frozen=True)

    kind: GateKind
    target: int = Field(ge=0)
    partner: int | None = Field(default=None, ge=0)
    params: tuple[float, ...] = ()
    controls: tuple[Control, ...] = ()

    @model_validator(mode="after")
    def check_shape(self) -> GateOp:
        """Validator to ensure parameters match the gate kind and qubits are distinct."""
        if len(self.params) != _PARAM_COUNT[self.kind]:
            msg = f"Gate '{self.kind}' takes {_PARAM_COUNT[self.kind]} parameters, got {len(self.params)}."
            raise ValueError(msg)
        if (self.kind is GateKind.SWAP) != (self.partner is not None):
            msg = "Only swap gates take a partner qubit, and swap gates require one."
            raise ValueError(msg)
        qubits = self.qubits
        if len(set(qubits)) != len(qubits):
            msg = f"Gate qubits must be distinct, got {qubits}."
            raise ValueError(msg)
        return self

    @property
    def qubits(self) -> tuple[int, ...]:
        """Every qubit the gate touches, controls first."""
        targets = (self.target,) if self.partner is None else (self.target, self.partner)
        return tuple(c.qubit for c in self.controls) + targets

    @property
    def arity(self) -> int:
        """Number of qubits the gate acts on."""
        return len(self.qubits)

    def matrix(self) -> NDArray[np.complex128]:
        """The 2x2 unitary applied to the target, ignoring controls."""
        match self.kind:
            case GateKind.HADAMARD:
                return np.array([[_SQRT_HALF, _SQRT_HALF], [_SQRT_HALF, -_SQRT_HALF]], dtype=np.complex128)
            case GateKind.PAULI_X:
                return np.array([[0, 1], [1, 0]], dtype=np.complex128)
            case GateKind.PHASE:
                (theta,) = self.params
                return np.array([[1, 0], [0, cmath.exp(1j * theta)]], dtype=np.complex128)
            case GateKind.U3:
                theta, phi, lam = self.params
                cos, sin = math.cos(theta / 2), math.sin(theta / 2)
                return np.array(
                    [
                        [cos, -cmath.exp(1j * lam) * sin],
                        [cmath.exp(1j * phi) * sin, cmath.exp(1j * (phi + lam)) * cos],
                    ],
                    dtype=np.complex128,
                )
            case GateKind.SWAP:
                msg = "Swap acts on two qubits and has no single-qubit matrix."
                raise ValueError(msg)

    def inverse(self) -> GateOp:
        """The gate undoing this one."""
        match self.kind:
            case GateKind.PHASE:
                return self.model_copy(update={"params": (-self.params[0],)})
            case GateKind.U3:
                theta, phi, lam = self.params
                return self.model_copy(update={"params": (-theta, -lam, -phi)})
            case _:
                return self


class Circuit(RootModel[list[GateOp]]):
    """An ordered list of gate applications."""

    model_config = ConfigDict(frozen=True)

    def __iter__(self) -> t.Iterator[GateOp]:  # type: ignore [override]  # noqa: D105
        return iter(self.root)

    def __len__(self) -> int:  # noqa: D105
        return len(self.root)

    def __add__(self, other: Circuit) -> Circuit:  # noqa: D105
        return Circuit(self.root + other.root)

    def inverse(self) -> Circuit:
        """The circuit undoing this one."""
        return Circuit([op.inverse() for op in reversed(self.root)])

    def width(self) -> int:
        """Smallest register the circuit fits on."""
        return max((max(op.qubits) + 1 for op in self.root), default=0)

    def counts(self) -> Counter[str]:
        """Number of gates per kind, with controlled gates keyed by their control count."""
        return Counter(op.kind.value if not op.controls else f"c{len(op.controls)}-{op.kind.value}" for op in self)


def _controls(controls: t.Iterable[ControlLike]) -> tuple[Control, ...]:
    return tuple(c if isinstance(c, Control) else Control(qubit=c[0], polarity=c[1]) for c in controls)  # type: ignore [arg-type]


def hadamard(qubit: int, controls: t.Iterable[ControlLike] = ()) -> GateOp:
    """Hadamard gate."""
    return GateOp(kind=GateKind.HADAMARD, target=qubit, controls=_controls(controls))


def pauli_x(qubit: int, controls: t.Iterable[ControlLike] = ()) -> GateOp:
    """Pauli X, or a multi-controlled X when controls are given."""
    return GateOp(kind=GateKind.PAULI_X, target=qubit, controls=_controls(controls))


def phase(theta: float, qubit: int, controls: t.Iterable[ControlLike] = ()) -> GateOp:
    """Phase shift diag(1, e^{i theta})."""
    return GateOp(kind=GateKind.PHASE, target=qubit, params=(theta,), controls=_controls(controls))


def u3(theta: float, phi: float, lam: float, qubit: int, controls: t.Iterable[ControlLike] = ()) -> GateOp:
    """Generic single-qubit rotation."""
    return GateOp(kind=GateKind.U3, target=qubit, params=(theta, phi, lam), controls=_controls(controls))


def swap(first: int, second: int, controls: t.Iterable[ControlLike] = ()) -> GateOp:
    """Swap two qubits, optionally controlled."""
    return GateOp(kind=GateKind.SWAP, target=first, partner=second, controls=_controls(controls))


def cnot(control: int, target: int) -> GateOp:
    """Controlled NOT."""
    return pauli_x(target, [(control, 1)])
