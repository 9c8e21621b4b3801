"""Netpbm grayscale and colour images: ASCII P2, binary P5 and binary P6.

Samples above 255 are stored as big-endian 16-bit words, as the format requires.
"""

import typing as t
from enum import StrEnum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from qfilter.exceptions import FormatError

if t.TYPE_CHECKING:
    from pathlib import Path

    from numpy.typing import ArrayLike, NDArray

MAX_MAXVAL = 65535
_BYTE_MAXVAL = 255
_HEADER_FIELDS = 4


class Magic(StrEnum):
    ASCII_GRAY = "P2"
    BINARY_GRAY = "P5"
    BINARY_RGB = "P6"

    @property
    def channels(self) -> int:
        """Samples per pixel."""
        return 3 if self is Magic.BINARY_RGB else 1


class NetpbmImage(BaseModel):
    """Pixels as (rows, cols) for grayscale or (rows, cols, 3) for RGB."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    pixels: np.ndarray
    maxval: int = Field(ge=1, le=MAX_MAXVAL)
    magic: Magic

    @property
    def is_rgb(self) -> bool:
        """Whether the image has three channels."""
        return self.magic.channels == 3  # noqa: PLR2004


def _skip_comment(data: bytes, pos: int) -> int:
    end = data.find(b"\n", pos)
    return len(data) if end == -1 else end + 1


def _tokens(data: bytes, pos: int, count: int | None) -> t.Iterator[tuple[bytes, int]]:
    """Whitespace separated tokens with their offsets, skipping '#' comments."""
    size = len(data)
    found = 0
    while pos < size and (count is None or found < count):
        char = data[pos : pos + 1]
        if char == b"#":
            pos = _skip_comment(data, pos)
        elif char.isspace():
            pos += 1
        else:
            start = pos
            while pos < size and not data[pos : pos + 1].isspace() and data[pos : pos + 1] != b"#":
                pos += 1
            found += 1
            yield data[start:pos], start


def _header_int(token: bytes, offset: int, name: str, upper: int | None = None) -> int:
    try:
        value = int(token)
    except ValueError:
        msg = f"Expected an integer {name}, got {token!r}"
        raise FormatError(msg, offset=offset) from None
    if value < 1 or (upper is not None and value > upper):
        msg = f"{name.capitalize()} {value} is out of range"
        raise FormatError(msg, offset=offset)
    return value


def parse_netpbm(data: bytes) -> NetpbmImage:
    """Parse a P2, P5 or P6 image.

    Raises:
        FormatError: On an unknown magic number, a bad header or a short raster, with the byte
            offset where parsing failed.
    """
    header = list(_tokens(data, 0, _HEADER_FIELDS))
    if not header or header[0][0].decode("ascii", errors="replace") not in {m.value for m in Magic}:
        msg = "Expected magic number P2, P5 or P6"
        raise FormatError(msg, offset=0)
    if len(header) < _HEADER_FIELDS:
        msg = "Header ended before width, height and maxval"
        raise FormatError(msg, offset=len(data))
    magic = Magic(header[0][0].decode("ascii"))
    width = _header_int(*header[1], "width")
    height = _header_int(*header[2], "height")
    maxval = _header_int(*header[3], "maxval", MAX_MAXVAL)
    count = width * height * magic.channels
    # Exactly one whitespace byte separates maxval from the raster.
    start = header[3][1] + len(header[3][0]) + 1
    if magic is Magic.ASCII_GRAY:
        fields = [token for token, _ in _tokens(data, start, None)]
        if len(fields) != count:
            msg = f"Expected {count} samples, found {len(fields)}"
            raise FormatError(msg, offset=start)
        try:
            samples = np.array([int(f) for f in fields], dtype=np.int64)
        except ValueError:
            msg = "Raster contains a non-integer sample"
            raise FormatError(msg, offset=start) from None
    else:
        dtype = np.dtype(">u2") if maxval > _BYTE_MAXVAL else np.dtype(np.uint8)
        raster = data[start : start + count * dtype.itemsize]
        if len(raster) != count * dtype.itemsize:
            msg = f"Raster holds {len(raster)} bytes, expected {count * dtype.itemsize}"
            raise FormatError(msg, offset=start)
        samples = np.frombuffer(raster, dtype=dtype).astype(np.int64)
    if samples.size and (samples.min() < 0 or samples.max() > maxval):
        msg = f"Samples must lie in 0..{maxval}"
        raise FormatError(msg, offset=start)
    shape = (height, width, 3) if magic.channels == 3 else (height, width)  # noqa: PLR2004
    return NetpbmImage(pixels=samples.reshape(shape), maxval=maxval, magic=magic)


def read_netpbm(path: Path) -> NetpbmImage:
    """Read a P2, P5 or P6 image file."""
    return parse_netpbm(path.read_bytes())


def format_netpbm(pixels: ArrayLike, maxval: int, *, ascii_gray: bool = False) -> bytes:
    """Serialise integer pixels: P6 for RGB, P5 for grayscale or P2 when `ascii_gray` is set.

    Raises:
        FormatError: If the pixels are not an integer image within 0..maxval.
    """
    array: NDArray[np.int64] = np.asarray(pixels)
    if not np.issubdtype(array.dtype, np.integer):
        msg = f"Pixels must be integers, got {array.dtype}"
        raise FormatError(msg)
    if not 1 <= maxval <= MAX_MAXVAL or (array.size and (array.min() < 0 or array.max() > maxval)):
        msg = f"Pixels must lie in 0..{maxval} with maxval at most {MAX_MAXVAL}"
        raise FormatError(msg)
    if array.ndim == 3 and array.shape[2] == 3:  # noqa: PLR2004
        magic = Magic.BINARY_RGB
    elif array.ndim == 2:  # noqa: PLR2004
        magic = Magic.ASCII_GRAY if ascii_gray else Magic.BINARY_GRAY
    else:
        msg = f"Expected a (rows, cols) or (rows, cols, 3) image, got shape {array.shape}"
        raise FormatError(msg)
    height, width = array.shape[:2]
    header = f"{magic}\n{width} {height}\n{maxval}\n".encode("ascii")
    if magic is Magic.ASCII_GRAY:
        body = "\n".join(" ".join(str(int(v)) for v in row) for row in array) + "\n"
        return header + body.encode("ascii")
    dtype = np.dtype(">u2") if maxval > _BYTE_MAXVAL else np.dtype(np.uint8)
    return header + array.astype(dtype).tobytes()


def write_netpbm(path: Path, pixels: ArrayLike, maxval: int, *, ascii_gray: bool = False) -> None:
    """Write pixels as a Netpbm image file."""
    path.write_bytes(format_netpbm(pixels, maxval, ascii_gray=ascii_gray))
