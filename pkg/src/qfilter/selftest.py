"""Re-run the worked examples shipped in ``data/fixtures.yaml`` and measure how far off we are."""

import logging
import math
import typing as t
from pathlib import Path

import numpy as np
from pydantic import BaseModel, ConfigDict
from pydantic_yaml import parse_yaml_file_as

from qfilter import classical, settings
from qfilter.encoding import encode_amplitude
from qfilter.exceptions import LayoutError
from qfilter.oracle import apply_filter_project, compile_marking, named_filter, prefix_filter
from qfilter.qft import Direction, apply_fourier
from qfilter.schemas import BasisLayout, EncodingMode, FilterKind
from qfilter.transpose import (
    apply_scheme,
    build_cnot_scheme,
    build_cswap_scheme,
    transposed_state,
    validate_layout,
)

if t.TYPE_CHECKING:
    from numpy.typing import ArrayLike

    from qfilter.transpose import TransposeScheme

logger = logging.getLogger(__name__)

FIXTURES_PATH = Path(__file__).parent / "data" / "fixtures.yaml"


class QuantumCase(BaseModel):
    marked: list[int]
    probability: float | None = None
    after_measurement: list[complex]
    after_qft: list[float]


class ClassicalCase(BaseModel):
    zeroed: list[int]
    after_filtering: list[complex]
    after_ifft: list[float]


class CnotCase(BaseModel):
    layout: BasisLayout
    prepared: list[float]
    transposed: list[float]
    probabilities: list[float]


class CswapCase(BaseModel):
    layout: BasisLayout
    transposed: list[float]
    recovered: list[list[float]]


class TransposeCases(BaseModel):
    matrix: list[list[float]]
    cnot: CnotCase
    cswap: CswapCase


class PrefixCase(BaseModel):
    n_qubits: int
    prefixes: list[str]
    marked_count: int


class FixtureBook(BaseModel):
    """Every printed vector the package is expected to reproduce."""

    signal: list[float]
    iqft: list[complex]
    quantum: dict[str, QuantumCase]
    classical: dict[str, ClassicalCase]
    transpose: TransposeCases
    prefix: PrefixCase


class CheckResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        """Whether the error is within tolerance."""
        return self.error <= self.tolerance


def load_fixtures(path: Path = FIXTURES_PATH) -> FixtureBook:
    """Load the fixture book."""
    return parse_yaml_file_as(FixtureBook, path)


def _error(actual: ArrayLike, expected: ArrayLike) -> float:
    return float(np.max(np.abs(np.asarray(actual) - np.asarray(expected))))


def _iqft(book: FixtureBook) -> t.Iterator[CheckResult]:
    state = apply_fourier(encode_amplitude(book.signal).state(), Direction.INVERSE)
    yield CheckResult(name="iqft", error=_error(state.amplitudes, book.iqft), tolerance=settings.FIXTURE_TOLERANCE)


_QUANTUM_KINDS = {
    "highpass": FilterKind.HIGH_PASS,
    "bandpass": FilterKind.BAND_PASS,
    "bandstop": FilterKind.BAND_STOP,
}


def _quantum(book: FixtureBook) -> t.Iterator[CheckResult]:
    signal = encode_amplitude(book.signal)
    frequency = apply_fourier(signal.state(), Direction.INVERSE)
    for name, kind in _QUANTUM_KINDS.items():
        case = book.quantum[name]
        spec = named_filter(kind, signal.n_qubits)
        marked = np.flatnonzero(spec.marked_mask()).tolist()
        yield CheckResult(name=f"{name} marks", error=float(marked != case.marked), tolerance=0)
        filtered, probability = apply_filter_project(frequency, spec)
        if case.probability is not None:
            yield CheckResult(
                name=f"{name} probability",
                error=abs(probability - case.probability),
                tolerance=settings.FIXTURE_TOLERANCE,
            )
        yield CheckResult(
            name=f"{name} after measurement",
            error=_error(filtered.amplitudes, case.after_measurement),
            tolerance=settings.FIXTURE_TOLERANCE,
        )
        output = apply_fourier(filtered, Direction.FORWARD)
        yield CheckResult(
            name=f"{name} after qft",
            error=_error(output.amplitudes, case.after_qft),
            tolerance=settings.FIXTURE_TOLERANCE,
        )


def _classical(book: FixtureBook) -> t.Iterator[CheckResult]:
    spectrum = classical.dft(book.signal)
    for name, case in book.classical.items():
        masked = classical.apply_mask(spectrum, case.zeroed)
        yield CheckResult(
            name=f"classical {name} spectrum",
            error=_error(masked, case.after_filtering),
            tolerance=settings.CLASSICAL_FIXTURE_TOLERANCE,
        )
        yield CheckResult(
            name=f"classical {name} ifft",
            error=_error(classical.idft(masked), case.after_ifft),
            tolerance=settings.CLASSICAL_FIXTURE_TOLERANCE,
        )


def _layout_check(name: str, layout: BasisLayout, scheme: TransposeScheme) -> CheckResult:
    try:
        validate_layout(layout, scheme)
    except LayoutError:
        logger.exception("Layout for %s rejected", name)
        return CheckResult(name=f"{name} layout", error=1, tolerance=0)
    return CheckResult(name=f"{name} layout", error=0, tolerance=0)


def _transpose(book: FixtureBook) -> t.Iterator[CheckResult]:
    matrix = np.array(book.transpose.matrix)
    transposed = matrix.T

    cnot = book.transpose.cnot
    scheme = build_cnot_scheme(4)
    yield _layout_check("cnot", cnot.layout, scheme)
    signal, state = transposed_state(matrix, scheme, cnot.layout, EncodingMode.PROBABILITY)
    printed = np.round(state.amplitudes.real, 3)
    grid = cnot.layout.as_array()
    yield CheckResult(
        name="cnot prepared", error=_error(signal.amplitudes, cnot.prepared), tolerance=settings.FIXTURE_TOLERANCE
    )
    yield CheckResult(
        name="cnot transposed", error=_error(state.amplitudes, cnot.transposed), tolerance=settings.FIXTURE_TOLERANCE
    )
    yield CheckResult(name="cnot probabilities", error=_error(printed**2, cnot.probabilities), tolerance=1e-6)
    yield CheckResult(
        name="cnot recovered",
        error=_error(printed[grid] ** 2 * signal.normalizer, transposed),
        tolerance=settings.TRANSPOSE_RECOVERY_TOLERANCE,
    )

    cswap = book.transpose.cswap
    scheme = build_cswap_scheme(4)
    yield _layout_check("cswap", cswap.layout, scheme)
    signal, state = transposed_state(matrix, scheme, cswap.layout, EncodingMode.AMPLITUDE)
    printed = np.round(state.amplitudes.real, 3)
    yield CheckResult(
        name="cswap transposed",
        error=_error(state.amplitudes, cswap.transposed),
        tolerance=settings.FIXTURE_TOLERANCE,
    )
    yield CheckResult(
        name="cswap recovered",
        error=_error(printed[cswap.layout.as_array()] * signal.normalizer, cswap.recovered),
        tolerance=settings.FIXTURE_TOLERANCE,
    )
    bypassed = apply_scheme(signal.state(), scheme.switched(enabled=False))
    yield CheckResult(name="cswap bypass", error=_error(bypassed.amplitudes, signal.amplitudes), tolerance=0)
    yield CheckResult(
        name="cswap normaliser", error=abs(signal.normalizer - math.sqrt(1240)), tolerance=settings.FIXTURE_TOLERANCE
    )


def _prefix(book: FixtureBook) -> t.Iterator[CheckResult]:
    case = book.prefix
    spec = prefix_filter(case.n_qubits, case.prefixes, keep_marked=True)
    yield CheckResult(name="prefix marked count", error=abs(spec.marked_count() - case.marked_count), tolerance=0)
    marking = compile_marking(spec)
    yield CheckResult(name="prefix marking gates", error=abs(len(marking.ops) - len(case.prefixes)), tolerance=0)


_CHECKS = (_iqft, _quantum, _classical, _transpose, _prefix)


def run_selftest(path: Path = FIXTURES_PATH) -> list[CheckResult]:
    """Run every fixture check."""
    book = load_fixtures(path)
    results = [result for check in _CHECKS for result in check(book)]
    failed = [r.name for r in results if not r.passed]
    if failed:
        logger.warning("Fixture checks failed: %s", ", ".join(failed))
    return results
