"""Comma-separated real values: one per line for a series, one row per line for a matrix."""

import typing as t

import numpy as np

from qfilter.exceptions import FormatError

if t.TYPE_CHECKING:
    from pathlib import Path

    from numpy.typing import ArrayLike, NDArray

# Twelve significant digits survive a write and read back unchanged.
VALUE_FORMAT = "{:.12g}"


def parse_csv(text: str) -> NDArray[np.float64]:
    """Parse CSV text. Blank lines and lines starting with '#' are skipped.

    A single column gives a 1-D series, anything wider a matrix.

    Raises:
        FormatError: On a non-numeric field, ragged rows or no data, with the offending line.
    """
    rows: list[list[float]] = []
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            row = [float(field) for field in stripped.split(",")]
        except ValueError:
            msg = f"Expected comma-separated numbers, got '{stripped}'"
            raise FormatError(msg, line=number) from None
        if not np.isfinite(row).all():
            msg = f"Expected finite numbers, got '{stripped}'"
            raise FormatError(msg, line=number)
        if rows and len(row) != len(rows[0]):
            msg = f"Expected {len(rows[0])} values per row, got {len(row)}"
            raise FormatError(msg, line=number)
        rows.append(row)
    if not rows:
        msg = "No values found"
        raise FormatError(msg)
    array = np.array(rows, dtype=np.float64)
    return array[:, 0] if array.shape[1] == 1 else array


def read_csv(path: Path) -> NDArray[np.float64]:
    """Read a series or matrix from a CSV file."""
    return parse_csv(path.read_text(encoding="utf-8"))


def format_csv(values: ArrayLike) -> str:
    """CSV text for a series or a matrix."""
    array = np.asarray(values, dtype=np.float64)
    if array.ndim == 1:
        lines = [VALUE_FORMAT.format(v) for v in array]
    else:
        lines = [",".join(VALUE_FORMAT.format(v) for v in row) for row in array]
    return "\n".join(lines) + "\n"


def write_csv(path: Path, values: ArrayLike) -> None:
    """Write a series or a matrix as CSV."""
    path.write_text(format_csv(values), encoding="utf-8")
