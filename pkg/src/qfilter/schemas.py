"""Module containing the serialisable qfilter schemas."""

import re
import typing as t
from enum import StrEnum
from pathlib import Path  # noqa: TC003

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    RootModel,
    field_serializer,
    field_validator,
    model_validator,
)

if t.TYPE_CHECKING:
    from numpy.typing import NDArray

PATTERN_REGEX = re.compile(r"^[01xX]+$")


class EncodingMode(StrEnum):
    AMPLITUDE = "amplitude"
    PROBABILITY = "probability"


class BitConstraint(BaseModel):
    model_config = ConfigDict(frozen=True)

    qubit: int = Field(ge=0)
    bit: t.Literal[0, 1]


class PrefixPattern(BaseModel):
    """A partial assignment of qubit values, such as |0000xx...x>, marking every state that agrees."""

    model_config = ConfigDict(frozen=True)

    constraints: tuple[BitConstraint, ...] = Field(min_length=1)

    @field_validator("constraints")
    @classmethod
    def distinct_qubits(cls, value: tuple[BitConstraint, ...]) -> tuple[BitConstraint, ...]:
        """Validator to ensure no qubit is constrained twice."""
        qubits = [c.qubit for c in value]
        if len(set(qubits)) != len(qubits):
            msg = f"Prefix constraints must reference distinct qubits, got {sorted(qubits)}."
            raise ValueError(msg)
        return value

    @classmethod
    def parse(cls, pattern: str, n_qubits: int) -> PrefixPattern:
        """Parses ket notation, most significant qubit first.

        A pattern shorter than the register constrains only its top qubits, so on 14 qubits
        ``"0000"`` is the same as ``"0000xxxxxxxxxx"``.
        """
        pattern = pattern.strip().strip("|>").strip()
        if PATTERN_REGEX.match(pattern) is None or len(pattern) > n_qubits:
            msg = f"Expected a pattern of at most {n_qubits} characters from '0', '1' and 'x', got '{pattern}'."
            raise ValueError(msg)
        constraints = [
            BitConstraint(qubit=n_qubits - 1 - position, bit=int(char))  # type: ignore [arg-type]
            for position, char in enumerate(pattern)
            if char in "01"
        ]
        return cls(constraints=tuple(constraints))

    def to_string(self, n_qubits: int) -> str:
        """Ket notation of the pattern, most significant qubit first."""
        chars = ["x"] * n_qubits
        for c in self.constraints:
            chars[n_qubits - 1 - c.qubit] = str(c.bit)
        return "".join(chars)

    def matches(self, indices: NDArray[np.int64]) -> NDArray[np.bool_]:
        """Which basis indices agree with every constraint."""
        result = np.ones(indices.shape, dtype=bool)
        for c in self.constraints:
            result &= ((indices >> c.qubit) & 1) == c.bit
        return result

    def overlaps(self, other: PrefixPattern) -> bool:
        """Whether some basis state matches both patterns."""
        mine = {c.qubit: c.bit for c in self.constraints}
        return all(mine.get(c.qubit, c.bit) == c.bit for c in other.constraints)


class FilterSpec(BaseModel):
    """Which frequency basis states are marked, and which postselection branch survives.

    The marked states are the union of `marked_indices` and every pattern in `prefixes`; the
    patterns must be pairwise disjoint so that each marked state flips the ancilla exactly once.
    """

    model_config = ConfigDict(frozen=True, validate_by_alias=True, validate_by_name=True, serialize_by_alias=True)

    n_data_qubits: int = Field(ge=1, alias="n")
    marked_indices: frozenset[int] = Field(default=frozenset(), alias="marked")
    prefixes: tuple[PrefixPattern, ...] = ()
    keep_marked: bool = False

    @model_validator(mode="before")
    @classmethod
    def parse_prefix_strings(cls, data: t.Any) -> t.Any:
        """Converts ket-notation prefix strings using the register size."""
        if not isinstance(data, dict):
            return data
        n = data.get("n", data.get("n_data_qubits"))
        prefixes = data.get("prefixes")
        if not isinstance(n, int) or not prefixes:
            return data
        return data | {"prefixes": [PrefixPattern.parse(p, n) if isinstance(p, str) else p for p in prefixes]}

    @model_validator(mode="after")
    def check_register(self) -> FilterSpec:
        """Validator to ensure every index and constraint fits the register and patterns are disjoint."""
        dimension = 2**self.n_data_qubits
        outside = sorted(i for i in self.marked_indices if not 0 <= i < dimension)
        if outside:
            msg = f"Marked indices {outside} are outside 0..{dimension - 1}."
            raise ValueError(msg)
        for prefix in self.prefixes:
            if any(c.qubit >= self.n_data_qubits for c in prefix.constraints):
                msg = f"Prefix {prefix.constraints} references qubits outside the {self.n_data_qubits}-qubit register."
                raise ValueError(msg)
        explicit = np.array(sorted(self.marked_indices), dtype=np.int64)
        for i, first in enumerate(self.prefixes):
            clashes = [p for p in self.prefixes[i + 1 :] if first.overlaps(p)]
            if clashes:
                msg = (
                    f"Marked patterns {first.to_string(self.n_data_qubits)} and "
                    f"{clashes[0].to_string(self.n_data_qubits)} overlap."
                )
                raise ValueError(msg)
            if first.matches(explicit).any():
                msg = f"Pattern {first.to_string(self.n_data_qubits)} also covers explicitly marked indices."
                raise ValueError(msg)
        return self

    @field_serializer("marked_indices")
    def sorted_indices(self, value: frozenset[int]) -> list[int]:
        """Serialises the marked indices in ascending order."""
        return sorted(value)

    @field_serializer("prefixes")
    def prefix_strings(self, value: tuple[PrefixPattern, ...]) -> list[str]:
        """Serialises the prefixes in ket notation."""
        return [p.to_string(self.n_data_qubits) for p in value]

    @property
    def dimension(self) -> int:
        """Number of data basis states."""
        return 2**self.n_data_qubits

    def patterns(self) -> list[PrefixPattern]:
        """Every marked pattern; an explicit index is a pattern constraining all qubits."""
        explicit = [
            PrefixPattern(
                constraints=tuple(
                    BitConstraint(qubit=q, bit=(index >> q) & 1)  # type: ignore [arg-type]
                    for q in reversed(range(self.n_data_qubits))
                )
            )
            for index in sorted(self.marked_indices)
        ]
        return explicit + list(self.prefixes)

    def marked_mask(self) -> NDArray[np.bool_]:
        """Boolean mask over the data basis, true on marked states."""
        indices = np.arange(self.dimension, dtype=np.int64)
        mask = np.zeros(self.dimension, dtype=bool)
        mask[list(self.marked_indices)] = True
        for prefix in self.prefixes:
            mask |= prefix.matches(indices)
        return mask

    def surviving_mask(self) -> NDArray[np.bool_]:
        """Boolean mask over the data basis, true on states kept by postselection."""
        marked = self.marked_mask()
        return marked if self.keep_marked else ~marked

    def marked_count(self) -> int:
        """Number of marked basis states, counted from the patterns without enumerating them."""
        return len(self.marked_indices) + sum(
            2 ** (self.n_data_qubits - len(p.constraints)) for p in self.prefixes
        )


class BasisLayout(RootModel[tuple[tuple[int, ...], ...]]):
    """An N x N grid assigning each basis state of an n-qubit register to a matrix position."""

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def check_bijection(self) -> BasisLayout:
        """Validator to ensure the grid is square and a bijection onto every basis state."""
        side = len(self.root)
        if side == 0 or side & (side - 1) or any(len(row) != side for row in self.root):
            msg = "Layout grid must be square with a power-of-two side."
            raise ValueError(msg)
        if sorted(i for row in self.root for i in row) != list(range(side * side)):
            msg = f"Layout grid must use every basis index 0..{side * side - 1} exactly once."
            raise ValueError(msg)
        return self

    @property
    def side(self) -> int:
        """Matrix side N."""
        return len(self.root)

    @property
    def n_qubits(self) -> int:
        """Register size n with N^2 = 2^n."""
        return (self.side * self.side).bit_length() - 1

    def as_array(self) -> NDArray[np.int64]:
        """The grid as an integer matrix."""
        return np.array(self.root, dtype=np.int64)

    @classmethod
    def from_array(cls, grid: NDArray[np.int64]) -> BasisLayout:
        """Builds a layout from an integer matrix."""
        return cls(tuple(tuple(int(v) for v in row) for row in grid))

    @classmethod
    def row_major(cls, n_qubits: int) -> BasisLayout:
        """The layout of plain row-major flattening, index r * N + c."""
        side = 2 ** (n_qubits // 2)
        return cls.from_array(np.arange(side * side, dtype=np.int64).reshape(side, side))


class FilterKind(StrEnum):
    LOW_PASS = "lowpass"
    HIGH_PASS = "highpass"
    BAND_PASS = "bandpass"
    BAND_STOP = "bandstop"
    CUSTOM = "custom"


class RunMode(StrEnum):
    PROJECT = "project"
    SAMPLE = "sample"


class SchemeKind(StrEnum):
    CNOT = "cnot"
    CSWAP = "cswap"
    ROW_MAJOR = "rowmajor"


class SpatialMode(StrEnum):
    FLATTENED = "flattened"
    COMPOSED = "composed"


class InputFormat(StrEnum):
    CSV = "csv"
    PGM = "pgm"
    PPM = "ppm"
    JSON = "json"


class FilterChoice(BaseModel):
    """A named filter with its edges, or a custom marked set."""

    kind: FilterKind = FilterKind.CUSTOM
    cutoff: int | None = Field(default=None, ge=1)
    band: tuple[int, int] | None = None
    marked: list[int] = []
    prefixes: list[str] = []
    keep_marked: bool | None = None

    @model_validator(mode="after")
    def custom_needs_marks(self) -> FilterChoice:
        """Validator to ensure a custom filter names what it marks."""
        if self.kind is FilterKind.CUSTOM and not (self.marked or self.prefixes):
            msg = "A custom filter needs marked indices or prefix patterns."
            raise ValueError(msg)
        return self


class RunConfig(BaseModel):
    """Everything one CLI invocation needs, loadable from YAML."""

    input: Path
    input_format: InputFormat | None = None
    filter: FilterChoice = Field(default_factory=lambda: FilterChoice(kind=FilterKind.HIGH_PASS))
    mode: RunMode = RunMode.PROJECT
    seed: int | None = Field(default=None, ge=0, lt=2**64)
    max_trials: int = Field(default=1000, ge=1)
    encoding: EncodingMode = EncodingMode.AMPLITUDE
    output: Path | None = None
    report: Path | None = None
    compare_classical: bool = False
    scheme: SchemeKind = SchemeKind.ROW_MAJOR
    layout: Path | None = None
    spatial: SpatialMode = SpatialMode.FLATTENED
    absolute: bool = False
    shift: bool = False

    @model_validator(mode="after")
    def sample_needs_seed(self) -> RunConfig:
        """Validator to ensure sampled runs are reproducible."""
        if self.mode is RunMode.SAMPLE and self.seed is None:
            msg = "Sample mode requires a seed."
            raise ValueError(msg)
        return self

    def resolved_format(self) -> InputFormat:
        """The input format, inferred from the file suffix when not given."""
        if self.input_format is not None:
            return self.input_format
        suffix = self.input.suffix.lower().lstrip(".")
        return InputFormat(suffix) if suffix in {f.value for f in InputFormat} else InputFormat.CSV


REPORT_SCHEMA_VERSION = 1


class RunReport(BaseModel):
    """What a run measured, written as versioned JSON."""

    model_config = ConfigDict(serialize_by_alias=True, validate_by_name=True, validate_by_alias=True)

    schema_version: t.Literal[1] = Field(default=REPORT_SCHEMA_VERSION, alias="schema")
    command: str
    n_qubits: int
    success_probability: float = Field(gt=0, le=1 + 1e-12)
    trials_used: int | None = None
    normalizer: float
    pad_count: int = Field(ge=0)
    marked_count: int | None = None
    max_residual_imaginary: float = Field(ge=0)
    classical_comparison_error: float | None = None
    output_scale: float | None = None
    clamped_pixels: int | None = None
    wall_time: float = Field(ge=0)
    output: str | None = None
