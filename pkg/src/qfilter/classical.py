"""Direct classical DFT, masking and FFT-shift, used as the referee for the quantum pipeline.

The forward transform is unnormalised, bins[k] = sum_x v[x] e^{-2 pi i k x / N}, so it equals
sqrt(N) times the IQFT amplitudes. It is summed directly rather than computed with a fast
transform so that it shares no code path with anything it checks.
"""

import typing as t

import numpy as np

from qfilter.exceptions import ShapeMismatchError

if t.TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray

# Rows of the DFT matrix materialised at once.
_CHUNK_ROWS = 256


def _as_signal(values: ArrayLike) -> NDArray[np.complex128]:
    signal = np.asarray(values, dtype=np.complex128).ravel()
    if signal.size == 0:
        msg = "Cannot transform an empty signal."
        raise ShapeMismatchError(msg)
    return signal


def _direct_sum(signal: NDArray[np.complex128], sign: int) -> NDArray[np.complex128]:
    size = signal.size
    positions = np.arange(size, dtype=np.int64)
    result = np.empty(size, dtype=np.complex128)
    for start in range(0, size, _CHUNK_ROWS):
        frequencies = positions[start : start + _CHUNK_ROWS]
        # Reduce k * x modulo N before scaling so large products keep full phase accuracy.
        exponent = np.outer(frequencies, positions) % size
        result[start : start + _CHUNK_ROWS] = np.exp(sign * 2j * np.pi * exponent / size) @ signal
    return result


def dft(values: ArrayLike) -> NDArray[np.complex128]:
    """Unnormalised forward DFT."""
    return _direct_sum(_as_signal(values), -1)


def idft(spectrum: ArrayLike) -> NDArray[np.complex128]:
    """Exact inverse of `dft`, carrying the 1/N factor."""
    bins = _as_signal(spectrum)
    return _direct_sum(bins, 1) / bins.size


def apply_mask(spectrum: ArrayLike, zeroed: t.Iterable[int]) -> NDArray[np.complex128]:
    """Set the listed bins to exactly zero, leaving the others untouched."""
    bins = _as_signal(spectrum).copy()
    indices = sorted(set(zeroed))
    outside = [i for i in indices if not 0 <= i < bins.size]
    if outside:
        msg = f"Mask indices {outside} are outside 0..{bins.size - 1}."
        raise ShapeMismatchError(msg)
    bins[indices] = 0
    return bins


def fft_shift(spectrum: ArrayLike) -> NDArray[np.complex128]:
    """Rotate by floor(N/2) so the DC bin sits in the middle. For display only."""
    bins = _as_signal(spectrum)
    return np.roll(bins, bins.size // 2)


def dft_rows(matrix: ArrayLike) -> NDArray[np.complex128]:
    """Transform every row of a matrix."""
    grid = np.asarray(matrix, dtype=np.complex128)
    return np.stack([dft(row) for row in grid])


def idft_rows(matrix: ArrayLike) -> NDArray[np.complex128]:
    """Inverse transform every row of a matrix."""
    grid = np.asarray(matrix, dtype=np.complex128)
    return np.stack([idft(row) for row in grid])


def dft2(matrix: ArrayLike) -> NDArray[np.complex128]:
    """Two-dimensional DFT composed as rows, transpose, rows, transpose."""
    return dft_rows(dft_rows(matrix).T).T


def idft2(matrix: ArrayLike) -> NDArray[np.complex128]:
    """Inverse of `dft2`."""
    return idft_rows(idft_rows(matrix).T).T


def filter_reference(values: ArrayLike, zeroed: t.Iterable[int]) -> NDArray[np.complex128]:
    """dft, mask, idft of a 1-D signal."""
    return idft(apply_mask(dft(values), zeroed))
