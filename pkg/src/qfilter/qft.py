"""Exact quantum Fourier transform circuits and their dense matrix oracles.

Sign conventions, with N = 2^n and omega = e^{2 pi i / N}:

=========  =====================  ================================  ==============================
direction  circuit                matrix                            classical counterpart
=========  =====================  ================================  ==============================
forward    QFT                    (1/sqrt N) [omega^{jk}]           inverse DFT, scaled by sqrt N
inverse    IQFT                   (1/sqrt N) [omega^{-jk}]          DFT, scaled by 1/sqrt N
=========  =====================  ================================  ==============================

The filtering pipeline therefore goes to the frequency domain with `Direction.INVERSE` and comes
back with `Direction.FORWARD`.
"""

import logging
import math
import typing as t
from enum import StrEnum

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from qfilter import settings
from qfilter.exceptions import GateValidationError, SizeCapError
from qfilter.simulator import Circuit, GateOp, StateVector, apply_circuit, hadamard, phase, swap

if t.TYPE_CHECKING:
    from numpy.typing import NDArray

logger = logging.getLogger(__name__)


class Direction(StrEnum):
    FORWARD = "forward"
    INVERSE = "inverse"

    def flipped(self) -> Direction:
        """The opposite direction."""
        return Direction.INVERSE if self is Direction.FORWARD else Direction.FORWARD


class FourierCircuit(BaseModel):
    """A QFT or IQFT acting on `qubits`, where `qubits[0]` is the least significant bit."""

    model_config = ConfigDict(frozen=True)

    n_qubits: int
    direction: Direction
    qubits: tuple[int, ...]
    ops: Circuit

    @model_validator(mode="after")
    def check_qubits(self) -> FourierCircuit:
        """Validator to ensure the register matches `n_qubits`."""
        if len(self.qubits) != self.n_qubits or len(set(self.qubits)) != self.n_qubits:
            msg = f"Expected {self.n_qubits} distinct qubits, got {self.qubits}."
            raise ValueError(msg)
        return self


def _register(n: int, qubits: t.Sequence[int] | None) -> tuple[int, ...]:
    if n < 1:
        msg = f"A Fourier transform needs at least one qubit, got {n}."
        raise GateValidationError(msg)
    register = tuple(range(n)) if qubits is None else tuple(qubits)
    if len(register) != n:
        msg = f"Expected {n} qubits for the transform, got {len(register)}."
        raise GateValidationError(msg)
    return register


def _qft_ops(register: tuple[int, ...]) -> list[GateOp]:
    n = len(register)
    ops: list[GateOp] = []
    for j in reversed(range(n)):
        ops.append(hadamard(register[j]))
        # Angles come straight from integer exponents, never from accumulated sums.
        ops.extend(phase(math.pi / 2 ** (j - k), register[j], [(register[k], 1)]) for k in reversed(range(j)))
    ops.extend(swap(register[i], register[n - 1 - i]) for i in range(n // 2))
    return ops


def build_qft(n: int, qubits: t.Sequence[int] | None = None) -> FourierCircuit:
    """Build the QFT, mapping |x> to (1/sqrt N) sum_k e^{2 pi i x k / N} |k>.

    Args:
        n: Number of qubits transformed.
        qubits: Register the transform acts on, least significant first. Defaults to q0..q(n-1).
    """
    register = _register(n, qubits)
    ops = Circuit(_qft_ops(register))
    logger.debug("Built %d-qubit QFT with %d gates", n, len(ops))
    return FourierCircuit(n_qubits=n, direction=Direction.FORWARD, qubits=register, ops=ops)


def build_iqft(n: int, qubits: t.Sequence[int] | None = None) -> FourierCircuit:
    """Build the IQFT, the exact inverse of `build_qft`."""
    register = _register(n, qubits)
    ops = Circuit(_qft_ops(register)).inverse()
    return FourierCircuit(n_qubits=n, direction=Direction.INVERSE, qubits=register, ops=ops)


def build_fourier(n: int, direction: Direction, qubits: t.Sequence[int] | None = None) -> FourierCircuit:
    """Build the transform for `direction`."""
    return build_qft(n, qubits) if direction is Direction.FORWARD else build_iqft(n, qubits)


def dft_matrix_oracle(
    n: int, direction: Direction, *, max_qubits: int = settings.MAX_DENSE_QUBITS
) -> NDArray[np.complex128]:
    """Dense unitary of the transform, straight from its matrix definition."""
    if not 1 <= n <= max_qubits:
        msg = f"Dense Fourier matrix of {n} qubits is outside 1..{max_qubits}."
        raise SizeCapError(msg)
    dimension = 2**n
    rows, columns = np.indices((dimension, dimension))
    exponent = (rows * columns) % dimension
    sign = 1 if direction is Direction.FORWARD else -1
    return np.exp(sign * 2j * np.pi * exponent / dimension) / math.sqrt(dimension)


def apply_fourier(state: StateVector, direction: Direction, qubits: t.Sequence[int] | None = None) -> StateVector:
    """Apply the QFT or IQFT to the whole register, or to `qubits` only."""
    n = state.n_qubits if qubits is None else len(qubits)
    return apply_circuit(state, build_fourier(n, direction, qubits).ops)
