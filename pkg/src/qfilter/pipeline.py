"""End-to-end runs: encode, go to the frequency domain, filter, come back and decode."""

import logging
import math
import time
import typing as t

import numpy as np
from pydantic import BaseModel, ConfigDict, TypeAdapter

from qfilter import classical
from qfilter.encoding import EncodedSignal, decode, encode_amplitude, max_residual_imaginary, unflatten
from qfilter.exceptions import EncodingModeError, FormatError, ShapeMismatchError
from qfilter.io import Magic, read_csv, read_layout, read_netpbm, write_csv, write_netpbm, write_report
from qfilter.oracle import apply_filter_project, apply_filter_sampled, named_filter, named_filter_2d
from qfilter.qft import Direction, apply_fourier
from qfilter.schemas import (
    EncodingMode,
    FilterChoice,
    FilterKind,
    FilterSpec,
    InputFormat,
    RunConfig,
    RunMode,
    RunReport,
    SpatialMode,
)
from qfilter.transpose import (
    apply_scheme,
    build_rowmajor_scheme,
    build_scheme,
    derive_layout,
    pad_general,
    transposed_state,
)

if t.TYPE_CHECKING:
    from pathlib import Path

    from numpy.typing import ArrayLike, NDArray

    from qfilter.simulator import StateVector

logger = logging.getLogger(__name__)

_series_adapter = TypeAdapter(list[float])


class FilterResult(BaseModel):
    """Everything a filter run produced, before anything is written out."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    signal: EncodedSignal
    spec: FilterSpec
    spectrum: np.ndarray
    amplitudes: np.ndarray
    success_probability: float
    trials_used: int | None = None

    @property
    def output_scale(self) -> float:
        """Factor turning the unit-norm output back into the classical filtered signal."""
        return self.signal.normalizer * math.sqrt(self.success_probability)

    def rescaled(self) -> NDArray[np.complex128]:
        """Output amplitudes on the scale of the input data."""
        return self.amplitudes * self.output_scale

    def values(self) -> NDArray[np.float64]:
        """Decoded output in the input's shape."""
        return decode(self.signal, self.amplitudes * math.sqrt(self.success_probability))

    def magnitudes(self) -> NDArray[np.float64]:
        """Absolute values of the rescaled output in the input's shape."""
        count = self.signal.shape.element_count
        return unflatten(np.abs(self.rescaled()[:count]), self.signal.shape)

    def residual_imaginary(self) -> float:
        """Largest imaginary part among the decoded output amplitudes."""
        return max_residual_imaginary(self.signal, self.amplitudes)


def resolve_filter_spec(choice: FilterChoice, n: int, *, two_dimensional: bool = False) -> FilterSpec:
    """Turn a filter choice into a spec on n data qubits.

    Explicit marks win over the named geometry; the kind then only picks the default branch,
    keeping the marked states for low pass and dropping them otherwise.
    """
    default_keep = choice.kind is FilterKind.LOW_PASS
    if choice.marked or choice.prefixes:
        keep = default_keep if choice.keep_marked is None else choice.keep_marked
        return FilterSpec.model_validate(
            {"n": n, "marked": choice.marked, "prefixes": choice.prefixes, "keep_marked": keep}
        )
    if two_dimensional:
        spec = named_filter_2d(choice.kind, n // 2, cutoff=choice.cutoff)
    else:
        spec = named_filter(choice.kind, n, cutoff=choice.cutoff, band=choice.band)
    if choice.keep_marked is not None:
        spec = spec.model_copy(update={"keep_marked": choice.keep_marked})
    return spec


def surviving_probability(spectrum: StateVector, spec: FilterSpec) -> float:
    """Probability mass of the kept branch, read straight off the frequency-domain state."""
    return float(np.sum(spectrum.probabilities()[spec.surviving_mask()]))


def _low_register(m: int) -> tuple[int, ...]:
    return tuple(range(m))


def _to_frequency(state: StateVector, *, composed: bool) -> StateVector:
    if not composed:
        return apply_fourier(state, Direction.INVERSE)
    m = state.n_qubits // 2
    transpose = build_rowmajor_scheme(state.n_qubits)
    state = apply_fourier(state, Direction.INVERSE, _low_register(m))
    state = apply_scheme(state, transpose)
    state = apply_fourier(state, Direction.INVERSE, _low_register(m))
    return apply_scheme(state, transpose)


def _from_frequency(state: StateVector, *, composed: bool) -> StateVector:
    if not composed:
        return apply_fourier(state, Direction.FORWARD)
    m = state.n_qubits // 2
    transpose = build_rowmajor_scheme(state.n_qubits)
    state = apply_scheme(state, transpose)
    state = apply_fourier(state, Direction.FORWARD, _low_register(m))
    state = apply_scheme(state, transpose)
    return apply_fourier(state, Direction.FORWARD, _low_register(m))


def filter_signal(
    signal: EncodedSignal,
    spec: FilterSpec,
    *,
    mode: RunMode = RunMode.PROJECT,
    rng: np.random.Generator | None = None,
    max_trials: int = 1000,
    composed: bool = False,
) -> FilterResult:
    """Filter an amplitude-encoded signal in the frequency domain.

    With `composed` the register holds an N x N image row-major, and the 2-D transform is built
    from row transforms and the row-major transpose.
    """
    frequency = _to_frequency(signal.state(), composed=composed)
    probability = surviving_probability(frequency, spec)
    trials = None
    if mode is RunMode.SAMPLE:
        filtered, trials = apply_filter_sampled(frequency, spec, rng or np.random.default_rng(), max_trials)
    else:
        filtered, _ = apply_filter_project(frequency, spec)
    output = _from_frequency(filtered, composed=composed)
    logger.info("Filtered %d-qubit signal, kept probability %.6f", signal.n_qubits, probability)
    return FilterResult(
        signal=signal,
        spec=spec,
        spectrum=filtered.copy_amplitudes(),
        amplitudes=output.copy_amplitudes(),
        success_probability=probability,
        trials_used=trials,
    )


def classical_filtered(signal: EncodedSignal, spec: FilterSpec, *, composed: bool = False) -> NDArray[np.complex128]:
    """The same filter computed with the direct DFT, on the scale of the input data."""
    padded = signal.amplitudes * signal.normalizer
    zeroed = np.flatnonzero(~spec.surviving_mask())
    if not composed:
        return classical.filter_reference(padded, zeroed)
    side = 2 ** (signal.n_qubits // 2)
    spectrum = classical.apply_mask(classical.dft2(padded.reshape(side, side)).ravel(), zeroed)
    return classical.idft2(spectrum.reshape(side, side)).ravel()


def comparison_error(result: FilterResult, *, composed: bool = False) -> float:
    """Largest difference between the quantum output and the classical filter on the data slots."""
    count = result.signal.shape.element_count
    reference = classical_filtered(result.signal, result.spec, composed=composed)
    return float(np.max(np.abs(result.rescaled()[:count] - reference[:count])))


def _rng(config: RunConfig) -> np.random.Generator | None:
    return np.random.default_rng(config.seed) if config.seed is not None else None


def _check_amplitude(config: RunConfig) -> None:
    if config.encoding is not EncodingMode.AMPLITUDE:
        msg = "Filtering runs use amplitude encoding."
        raise EncodingModeError(msg)


def read_series(path: Path, input_format: InputFormat) -> NDArray[np.float64]:
    """Read a 1-D series from CSV or from a JSON list of numbers."""
    match input_format:
        case InputFormat.CSV:
            values = read_csv(path)
        case InputFormat.JSON:
            values = np.array(_series_adapter.validate_json(path.read_bytes()), dtype=np.float64)
        case _:
            msg = f"A series cannot be read from {input_format} input"
            raise FormatError(msg)
    if values.ndim == 2 and 1 in values.shape:  # noqa: PLR2004
        values = values.ravel()
    if values.ndim != 1 or values.size < 2:  # noqa: PLR2004
        msg = f"Expected a series of at least two samples, got shape {values.shape}."
        raise ShapeMismatchError(msg)
    return values


def _spectrum_path(output: Path) -> Path:
    return output.with_name(f"{output.stem}.spectrum.csv")


def run_filter_1d(config: RunConfig) -> RunReport:
    """Filter a series read from `config.input`, writing the output series and the report."""
    started = time.perf_counter()
    _check_amplitude(config)
    signal = encode_amplitude(read_series(config.input, config.resolved_format()))
    spec = resolve_filter_spec(config.filter, signal.n_qubits)
    result = filter_signal(signal, spec, mode=config.mode, rng=_rng(config), max_trials=config.max_trials)
    error = comparison_error(result) if config.compare_classical else None
    if config.output is not None:
        write_csv(config.output, result.values())
        if config.shift:
            bins = result.spectrum * math.sqrt(signal.amplitudes.size) * result.output_scale
            write_csv(_spectrum_path(config.output), np.abs(classical.fft_shift(bins)))
    report = RunReport(
        command="filter1d",
        n_qubits=signal.n_qubits,
        success_probability=result.success_probability,
        trials_used=result.trials_used,
        normalizer=signal.normalizer,
        pad_count=signal.pad_count,
        marked_count=spec.marked_count(),
        max_residual_imaginary=result.residual_imaginary(),
        classical_comparison_error=error,
        output_scale=result.output_scale,
        wall_time=time.perf_counter() - started,
        output=str(config.output) if config.output else None,
    )
    _finish(config, report)
    return report


def _composed_image(pixels: NDArray[np.int64]) -> None:
    rows, cols = pixels.shape[0], pixels.shape[-1]
    if pixels.ndim != 2 or rows != cols or rows < 2 or rows & (rows - 1):  # noqa: PLR2004
        msg = f"Composed 2-D filtering needs a square grayscale image with a power-of-two side, got {pixels.shape}."
        raise ShapeMismatchError(msg)


def to_pixels(values: NDArray[np.float64], maxval: int) -> tuple[NDArray[np.int64], int]:
    """Round to integers and clamp into 0..maxval, counting the pixels that needed clamping."""
    rounded = np.rint(values)
    clamped = int(np.count_nonzero((rounded < 0) | (rounded > maxval)))
    return np.clip(rounded, 0, maxval).astype(np.int64), clamped


def run_filter_2d(config: RunConfig) -> RunReport:
    """Filter a PGM or PPM image, flattened or as a true 2-D transform, and write the image."""
    started = time.perf_counter()
    _check_amplitude(config)
    if config.resolved_format() not in {InputFormat.PGM, InputFormat.PPM}:
        msg = f"Images must be PGM or PPM, got {config.resolved_format()}"
        raise FormatError(msg)
    image = read_netpbm(config.input)
    composed = config.spatial is SpatialMode.COMPOSED
    if composed:
        _composed_image(image.pixels)
    signal = encode_amplitude(image.pixels)
    spec = resolve_filter_spec(config.filter, signal.n_qubits, two_dimensional=composed)
    result = filter_signal(
        signal, spec, mode=config.mode, rng=_rng(config), max_trials=config.max_trials, composed=composed
    )
    error = comparison_error(result, composed=composed) if config.compare_classical else None
    values = result.magnitudes() if config.absolute else result.values()
    pixels, clamped = to_pixels(values, image.maxval)
    if clamped:
        logger.info("Clamped %d pixel values into 0..%d", clamped, image.maxval)
    if config.output is not None:
        write_netpbm(config.output, pixels, image.maxval, ascii_gray=image.magic is Magic.ASCII_GRAY)
    report = RunReport(
        command="filter2d",
        n_qubits=signal.n_qubits,
        success_probability=result.success_probability,
        trials_used=result.trials_used,
        normalizer=signal.normalizer,
        pad_count=signal.pad_count,
        marked_count=spec.marked_count(),
        max_residual_imaginary=result.residual_imaginary(),
        classical_comparison_error=error,
        output_scale=result.output_scale,
        clamped_pixels=clamped,
        wall_time=time.perf_counter() - started,
        output=str(config.output) if config.output else None,
    )
    _finish(config, report)
    return report


def transpose_values(matrix: ArrayLike, config: RunConfig) -> tuple[NDArray[np.float64], RunReport]:
    """Pad, transpose with the configured scheme and crop back to the transposed shape."""
    started = time.perf_counter()
    padded, crop = pad_general(matrix)
    scheme = build_scheme(config.scheme, crop.n_qubits)
    layout = read_layout(config.layout) if config.layout else derive_layout(scheme)
    signal, state = transposed_state(padded, scheme, layout, config.encoding)
    result = crop.crop_transposed(decode(signal, state.amplitudes))
    report = RunReport(
        command="transpose",
        n_qubits=crop.n_qubits,
        success_probability=1.0,
        normalizer=signal.normalizer,
        pad_count=crop.side * crop.side - crop.rows * crop.cols,
        max_residual_imaginary=max_residual_imaginary(signal, state.amplitudes),
        wall_time=time.perf_counter() - started,
        output=str(config.output) if config.output else None,
    )
    return result, report


def run_transpose(config: RunConfig) -> RunReport:
    """Transpose the CSV matrix at `config.input` and write the result."""
    matrix = read_csv(config.input)
    if matrix.ndim == 1:
        matrix = matrix.reshape(-1, 1)
    result, report = transpose_values(matrix, config)
    if config.output is not None:
        write_csv(config.output, result)
    _finish(config, report)
    return report


def _finish(config: RunConfig, report: RunReport) -> None:
    if config.report is not None:
        write_report(config.report, report)
    logger.info("%s finished in %.3fs", report.command, report.wall_time)
