"""Frame representation, luma conversion and summed-area tables.

Images are plain numpy arrays: an RGB frame is ``uint8`` with shape
``(height, width, 3)`` and a gray image is ``uint8`` with shape
``(height, width)``.  Public coordinates are 0-based, ``x`` is the column
and ``y`` the row.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import BoundsError, DimensionOverflowError, ImageFormatError

# 77 + 150 + 29 == 256, so gray inputs map to themselves.
LUMA_WEIGHTS = (77, 150, 29)

SUM_DTYPE = np.uint32
SUM_MAX = int(np.iinfo(SUM_DTYPE).max)


class Rect(NamedTuple):
    """Inclusive pixel rectangle ``[x0, x1] x [y0, y1]``."""

    x0: int
    y0: int
    x1: int
    y1: int


def as_rgb(frame) -> np.ndarray:
    """Validate an RGB frame and return it as a ``uint8`` array."""
    arr = np.asarray(frame)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ImageFormatError(f"RGB frame must have shape (h, w, 3), got {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ImageFormatError("RGB frame must be at least 1x1")
    return _as_u8(arr)


def as_gray(gray) -> np.ndarray:
    """Validate a gray image and return it as a ``uint8`` array."""
    arr = np.asarray(gray)
    if arr.ndim != 2:
        raise ImageFormatError(f"gray image must be 2-D, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ImageFormatError("gray image must be at least 1x1")
    return _as_u8(arr)


def _as_u8(arr: np.ndarray) -> np.ndarray:
    if arr.dtype == np.uint8:
        return arr
    if arr.dtype.kind not in "iub":
        raise ImageFormatError(f"expected integer pixels, got dtype {arr.dtype}")
    if arr.size and (arr.min() < 0 or arr.max() > 255):
        raise ImageFormatError("pixel values must lie in [0, 255]")
    return arr.astype(np.uint8)


def to_intensity(frame) -> np.ndarray:
    """Integer luma ``(77 R + 150 G + 29 B + 128) >> 8`` per pixel."""
    rgb = as_rgb(frame).astype(np.uint16)
    wr, wg, wb = LUMA_WEIGHTS
    acc = wr * rgb[..., 0] + wg * rgb[..., 1] + wb * rgb[..., 2] + 128
    return (acc >> 8).astype(np.uint8)


def check_sum_range(height: int, width: int) -> None:
    if width * height * 255 > SUM_MAX:
        raise DimensionOverflowError(
            f"{width}x{height} image can overflow 32-bit sums "
            f"({width * height * 255} > {SUM_MAX})"
        )


@dataclass(frozen=True)
class IntegralImage:
    """Inclusive prefix sums: ``sums[y, x]`` is the total of ``gray[:y+1, :x+1]``."""

    sums: np.ndarray

    @property
    def height(self) -> int:
        return self.sums.shape[0]

    @property
    def width(self) -> int:
        return self.sums.shape[1]

    def at(self, x: int, y: int) -> int:
        """Corner read with zero extension above and left of the image."""
        if x < 0 or y < 0:
            return 0
        return int(self.sums[y, x])

    def padded(self) -> np.ndarray:
        """Sums as int64 with a leading zero row and column."""
        out = np.zeros((self.height + 1, self.width + 1), dtype=np.int64)
        out[1:, 1:] = self.sums
        return out

    def box_sums(self, size: int) -> np.ndarray:
        """Sum of every ``size x size`` window, indexed by its top-left pixel.

        The result has shape ``(height - size + 1, width - size + 1)``.
        """
        if size < 1 or size > self.height or size > self.width:
            raise BoundsError(f"window size {size} does not fit {self.width}x{self.height}")
        p = self.padded()
        return p[size:, size:] - p[:-size, size:] - p[size:, :-size] + p[:-size, :-size]


def integral(gray) -> IntegralImage:
    """Build the summed-area table of a gray image."""
    g = as_gray(gray)
    check_sum_range(*g.shape)
    sums = np.cumsum(np.cumsum(g, axis=0, dtype=SUM_DTYPE), axis=1, dtype=SUM_DTYPE)
    sums.flags.writeable = False
    return IntegralImage(sums)


def rect_sum(ii: IntegralImage, r: Rect) -> int:
    """Sum over an inclusive rectangle using four corner reads."""
    x0, y0, x1, y1 = r
    if not (0 <= x0 <= x1 < ii.width and 0 <= y0 <= y1 < ii.height):
        raise BoundsError(f"{r} is outside a {ii.width}x{ii.height} image")
    return ii.at(x1, y1) - ii.at(x0 - 1, y1) - ii.at(x1, y0 - 1) + ii.at(x0 - 1, y0 - 1)


def window_bounds(center: int, size: int) -> tuple[int, int]:
    """Inclusive 1-D extent of a window; even sizes span ``[c - s/2, c + s/2 - 1]``."""
    lo = center - size // 2
    return lo, lo + size - 1


def window_sum(ii: IntegralImage, center: tuple[int, int], size: int) -> int:
    """Sum of the ``size x size`` window around ``center = (x, y)``."""
    if size < 1:
        raise BoundsError(f"window size must be positive, got {size}")
    x, y = center
    x0, x1 = window_bounds(x, size)
    y0, y1 = window_bounds(y, size)
    if x0 < 0 or y0 < 0 or x1 >= ii.width or y1 >= ii.height:
        raise BoundsError(
            f"{size}x{size} window at ({x}, {y}) leaves a {ii.width}x{ii.height} image"
        )
    return rect_sum(ii, Rect(x0, y0, x1, y1))
