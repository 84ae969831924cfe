"""Binary PGM (P5) and PPM (P6) reading and writing, 8-bit only."""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np

from .errors import ImageFormatError

_WHITESPACE = b" \t\r\n\v\f"


def _header_tokens(data: bytes, count: int) -> tuple[list[bytes], int]:
    """Read ``count`` whitespace-separated header tokens, skipping ``#`` comments.

    Returns the tokens and the offset of the single whitespace byte that
    terminates the last one.
    """
    tokens = []
    pos = 0
    n = len(data)
    while len(tokens) < count:
        while pos < n and data[pos] in _WHITESPACE:
            pos += 1
        if pos < n and data[pos] == ord("#"):
            while pos < n and data[pos] not in b"\r\n":
                pos += 1
            continue
        start = pos
        while pos < n and data[pos] not in _WHITESPACE and data[pos] != ord("#"):
            pos += 1
        if start == pos:
            raise ImageFormatError("truncated netpbm header")
        tokens.append(data[start:pos])
    return tokens, pos


def decode(data: bytes) -> np.ndarray:
    """Decode P5 to ``(h, w)`` or P6 to ``(h, w, 3)`` ``uint8`` arrays."""
    magic = data[:2]
    if magic not in (b"P5", b"P6"):
        raise ImageFormatError(f"unsupported netpbm magic {magic!r}; expected P5 or P6")
    tokens, pos = _header_tokens(data[2:], 3)
    pos += 2
    try:
        width, height, maxval = (int(t) for t in tokens)
    except ValueError:
        raise ImageFormatError(f"non-numeric netpbm header field in {tokens!r}") from None
    if width < 1 or height < 1:
        raise ImageFormatError(f"invalid dimensions {width}x{height}")
    if maxval != 255:
        raise ImageFormatError(f"maxval must be 255, got {maxval}")
    if pos >= len(data) or data[pos] not in _WHITESPACE:
        raise ImageFormatError("missing whitespace after maxval")
    pos += 1
    channels = 3 if magic == b"P6" else 1
    expected = width * height * channels
    raster = data[pos:pos + expected]
    if len(raster) != expected:
        raise ImageFormatError(f"raster has {len(raster)} bytes, expected {expected}")
    arr = np.frombuffer(raster, dtype=np.uint8)
    shape = (height, width, 3) if channels == 3 else (height, width)
    return arr.reshape(shape).copy()


def encode(image) -> bytes:
    arr = np.asarray(image)
    if arr.dtype != np.uint8:
        raise ImageFormatError(f"netpbm output needs uint8 pixels, got {arr.dtype}")
    if arr.ndim == 2:
        magic = b"P5"
    elif arr.ndim == 3 and arr.shape[2] == 3:
        magic = b"P6"
    else:
        raise ImageFormatError(f"cannot encode array of shape {arr.shape}")
    height, width = arr.shape[:2]
    header = b"%s\n%d %d\n255\n" % (magic, width, height)
    return header + np.ascontiguousarray(arr).tobytes()


def read(path: str | os.PathLike) -> np.ndarray:
    return decode(Path(path).read_bytes())


def read_gray(path: str | os.PathLike) -> np.ndarray:
    arr = read(path)
    if arr.ndim != 2:
        raise ImageFormatError(f"{path}: expected a P5 (gray) image")
    return arr


def read_rgb(path: str | os.PathLike) -> np.ndarray:
    arr = read(path)
    if arr.ndim != 3:
        raise ImageFormatError(f"{path}: expected a P6 (color) image")
    return arr


def write(path: str | os.PathLike, image) -> None:
    Path(path).write_bytes(encode(image))


def mask_to_gray(mask) -> np.ndarray:
    """Map a boolean mask to 0/255 intensities."""
    return np.where(np.asarray(mask, dtype=bool), np.uint8(255), np.uint8(0))


def write_mask(path: str | os.PathLike, mask) -> None:
    write(path, mask_to_gray(mask))


def read_mask(path: str | os.PathLike) -> np.ndarray:
    return read_gray(path) != 0
