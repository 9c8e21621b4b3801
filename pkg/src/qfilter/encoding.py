"""Conversion between classical data and normalised amplitude vectors."""

import logging
import math
import typing as t

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from qfilter import settings
from qfilter.exceptions import (
    DegenerateInputError,
    EncodingModeError,
    LayoutError,
    ShapeMismatchError,
    SizeCapError,
    StateValidationError,
)
from qfilter.schemas import BasisLayout, EncodingMode
from qfilter.simulator import StateVector, set_amplitudes

if t.TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray

logger = logging.getLogger(__name__)

RGB_CHANNELS = 3


class SignalShape(BaseModel):
    """Classical shape of encoded data: a series, a grayscale image or an RGB image."""

    model_config = ConfigDict(frozen=True)

    kind: t.Literal["series", "image", "rgb"]
    dims: tuple[int, ...]

    @property
    def element_count(self) -> int:
        """Number of classical values."""
        return math.prod(self.dims)


class EncodedSignal(BaseModel):
    """Amplitudes plus everything needed to recover the classical values from them."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    amplitudes: np.ndarray
    shape: SignalShape
    pad_count: int = Field(ge=0)
    mode: EncodingMode
    normalizer: float = Field(gt=0)
    layout: BasisLayout | None = None

    @property
    def n_qubits(self) -> int:
        """Qubits needed for the amplitudes."""
        return int(self.amplitudes.size).bit_length() - 1

    def state(self) -> StateVector:
        """Prepare the register directly in the encoded state."""
        return set_amplitudes(self.amplitudes)


def flatten(data: ArrayLike) -> tuple[NDArray[np.float64], SignalShape]:
    """Reshape a series, matrix or RGB cube into a 1-D array.

    Matrices are read row by row. RGB cubes of shape (rows, cols, 3) are read plane by plane: all
    red values, then all green, then all blue, each plane row by row.
    """
    array = np.asarray(data, dtype=np.float64)
    if array.size == 0:
        msg = "Cannot flatten empty data."
        raise ShapeMismatchError(msg)
    if not np.isfinite(array).all():
        msg = "Input holds a NaN or infinite value."
        raise DegenerateInputError(msg)
    match array.ndim:
        case 1:
            return array.copy(), SignalShape(kind="series", dims=array.shape)
        case 2:
            return array.ravel().copy(), SignalShape(kind="image", dims=array.shape)
        case 3 if array.shape[2] == RGB_CHANNELS:
            return np.moveaxis(array, -1, 0).ravel().copy(), SignalShape(kind="rgb", dims=array.shape)
        case _:
            msg = f"Expected a series, a matrix or an RGB cube, got shape {array.shape}."
            raise ShapeMismatchError(msg)


def unflatten(values: NDArray[np.float64], shape: SignalShape) -> NDArray[np.float64]:
    """Inverse of `flatten`."""
    if values.size != shape.element_count:
        msg = f"Expected {shape.element_count} values for {shape.kind} {shape.dims}, got {values.size}."
        raise ShapeMismatchError(msg)
    if shape.kind == "rgb":
        rows, cols, channels = shape.dims
        return np.moveaxis(values.reshape(channels, rows, cols), 0, -1)
    return values.reshape(shape.dims)


def register_size(element_count: int) -> int:
    """Smallest power of two holding `element_count` values, never fewer than two."""
    return max(2, 1 << (element_count - 1).bit_length())


def _pad(values: NDArray[np.complex128], size: int) -> NDArray[np.complex128]:
    padded = np.zeros(size, dtype=np.complex128)
    padded[: values.size] = values
    return padded


def encode_amplitude(values: ArrayLike) -> EncodedSignal:
    """Encode real values as amplitudes, x / ||x||, zero padded to a power of two.

    Raises:
        DegenerateInputError: If every value is zero or any value is not finite.
    """
    flat, shape = flatten(values)
    normalizer = float(np.linalg.norm(flat))
    if normalizer == 0:
        raise DegenerateInputError
    size = register_size(flat.size)
    logger.debug("Amplitude encoding %d values on %d states", flat.size, size)
    return EncodedSignal(
        amplitudes=_pad((flat / normalizer).astype(np.complex128), size),
        shape=shape,
        pad_count=size - flat.size,
        mode=EncodingMode.AMPLITUDE,
        normalizer=normalizer,
    )


def encode_probability(values: ArrayLike) -> EncodedSignal:
    """Encode non-negative values as measurement probabilities, amplitude sqrt(x / sum x).

    Raises:
        EncodingModeError: If any value is negative.
        DegenerateInputError: If every value is zero or any value is not finite.
    """
    flat, shape = flatten(values)
    if (flat < 0).any():
        raise EncodingModeError
    normalizer = float(flat.sum())
    if normalizer == 0:
        raise DegenerateInputError
    size = register_size(flat.size)
    return EncodedSignal(
        amplitudes=_pad(np.sqrt(flat / normalizer).astype(np.complex128), size),
        shape=shape,
        pad_count=size - flat.size,
        mode=EncodingMode.PROBABILITY,
        normalizer=normalizer,
    )


def encode(values: ArrayLike, mode: EncodingMode) -> EncodedSignal:
    """Encode with the given mode."""
    return encode_amplitude(values) if mode is EncodingMode.AMPLITUDE else encode_probability(values)


def _meaningful(signal: EncodedSignal, amplitudes: NDArray[np.complex128]) -> NDArray[np.complex128]:
    if amplitudes.size != signal.amplitudes.size:
        msg = f"Expected {signal.amplitudes.size} amplitudes, got {amplitudes.size}."
        raise ShapeMismatchError(msg)
    if signal.layout is not None:
        return amplitudes[signal.layout.as_array().ravel()]
    return amplitudes[: signal.shape.element_count]


def align_global_phase(amplitudes: NDArray[np.complex128]) -> NDArray[np.complex128]:
    """Rotate away a global phase so the largest amplitude lies on the real axis.

    A global phase of pi cannot be told apart from negating every value, so the rotation is
    resolved modulo pi into (-pi/2, pi/2] and never flips the sign of a real vector.
    """
    pivot = amplitudes[int(np.argmax(np.abs(amplitudes)))]
    if pivot == 0:
        return amplitudes.copy()
    angle = (float(np.angle(pivot)) + math.pi / 2) % math.pi - math.pi / 2
    return amplitudes * np.exp(-1j * angle)


def max_residual_imaginary(signal: EncodedSignal, amplitudes: ArrayLike) -> float:
    """Largest imaginary magnitude among the amplitudes a decode would read."""
    meaningful = _meaningful(signal, np.asarray(amplitudes, dtype=np.complex128).ravel())
    return float(np.max(np.abs(meaningful.imag), initial=0.0))


def decode(
    signal: EncodedSignal, amplitudes: ArrayLike, *, strict: bool = False, align_phase: bool = False
) -> NDArray[np.float64]:
    """Recover classical values, in their original shape, from amplitudes.

    Amplitude mode returns the real part times the normaliser; probability mode returns
    |amplitude|^2 times the normaliser. Padded slots are never read.

    Args:
        signal: The encoding the amplitudes came from.
        amplitudes: Amplitudes to decode, of the same length as `signal.amplitudes`.
        strict: Reject amplitude-mode vectors whose imaginary parts exceed 1e-6.
        align_phase: Remove a global phase before taking the real part.
    """
    vector = np.asarray(amplitudes, dtype=np.complex128).ravel()
    if align_phase:
        vector = align_global_phase(vector)
    meaningful = _meaningful(signal, vector)
    if signal.mode is EncodingMode.PROBABILITY:
        values = np.abs(meaningful) ** 2 * signal.normalizer
    else:
        residual = float(np.max(np.abs(meaningful.imag), initial=0.0))
        if strict and residual > settings.STRICT_IMAGINARY_TOLERANCE:
            msg = f"Decoded amplitudes carry imaginary parts up to {residual:.3g}."
            raise StateValidationError(msg)
        values = meaningful.real * signal.normalizer
    if signal.layout is not None:
        return values.reshape(signal.layout.side, signal.layout.side)
    return unflatten(values, signal.shape)


def synthesize_preparation_unitary(
    target: ArrayLike, *, max_qubits: int = settings.MAX_SYNTHESIS_QUBITS
) -> NDArray[np.complex128]:
    """A unitary whose first column is `target`, so it maps |0...0> to the target state.

    The remaining columns are an orthonormal completion from a complete QR factorisation.
    """
    vector = np.asarray(target, dtype=np.complex128).ravel()
    if vector.size > 2**max_qubits:
        msg = f"Dense synthesis is capped at {2**max_qubits} amplitudes, got {vector.size}."
        raise SizeCapError(msg)
    norm_sq = float(np.vdot(vector, vector).real)
    if abs(norm_sq - 1) > settings.INPUT_NORM_TOLERANCE:
        msg = f"Target must have unit norm, got squared norm {norm_sq:.12g}."
        raise StateValidationError(msg)
    q, r = np.linalg.qr(vector.reshape(-1, 1), mode="complete")
    # q[:, 0] is the target up to the unit-modulus factor r[0, 0].
    unitary = q.astype(np.complex128)
    unitary[:, 0] *= r[0, 0]
    return unitary


def layout_encode(matrix: ArrayLike, layout: BasisLayout, mode: EncodingMode) -> EncodedSignal:
    """Encode an N x N matrix so entry (i, j) sits on basis state ``layout[i][j]``.

    Raises:
        LayoutError: If the matrix and the layout differ in size.
    """
    array = np.asarray(matrix, dtype=np.float64)
    if array.shape != (layout.side, layout.side):
        msg = f"Matrix of shape {array.shape} does not fit a {layout.side}x{layout.side} layout."
        raise LayoutError(msg)
    flat = encode(array, mode)
    amplitudes = np.zeros(layout.side * layout.side, dtype=np.complex128)
    amplitudes[layout.as_array().ravel()] = flat.amplitudes[: array.size]
    return EncodedSignal(
        amplitudes=amplitudes,
        shape=flat.shape,
        pad_count=0,
        mode=mode,
        normalizer=flat.normalizer,
        layout=layout,
    )
