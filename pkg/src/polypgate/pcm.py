"""Positive contrast mask.

A pixel is set when the mean of the small ``a x a`` window around it is
strictly greater than ``ratio`` times the mean of the concentric ``b x b``
window.  The comparison is done on integer window sums by cross
multiplication, so no division or floating point is involved.

An even-sized window has no middle pixel, so it covers either
``[c - s/2, c + s/2 - 1]`` ("low") or the same span moved one pixel up
the axis.  With ``centering="low"`` only the first placement is tested.
The default ``"symmetric"`` requires the test to pass for every
placement, with both windows shifted together, which makes the mask
commute with mirroring and 90 degree rotation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .image_core import IntegralImage


CENTERINGS = ("symmetric", "low")


@dataclass(frozen=True)
class PcmConfig:
    a: int = 16
    b: int = 64
    ratio_num: int = 5
    ratio_den: int = 4
    centering: str = "symmetric"

    def __post_init__(self):
        if self.centering not in CENTERINGS:
            raise ConfigError(f"centering must be one of {CENTERINGS}, got {self.centering!r}")
        if not 1 <= self.a < self.b:
            raise ConfigError(f"need 1 <= a < b, got a={self.a}, b={self.b}")
        if not self.ratio_num > self.ratio_den > 0:
            raise ConfigError(
                f"contrast ratio must exceed 1, got {self.ratio_num}/{self.ratio_den}"
            )

    def check_fits(self, height: int, width: int) -> None:
        if self.b > min(height, width):
            raise ConfigError(
                f"outer window b={self.b} does not fit a {width}x{height} image"
            )


def compute_pcm(ii: IntegralImage, cfg: PcmConfig | None = None) -> np.ndarray:
    """Boolean mask of pixels whose small-window mean beats the large one.

    Pixels where any tested ``b x b`` window leaves the image are always 0.
    """
    cfg = cfg or PcmConfig()
    h, w = ii.height, ii.width
    cfg.check_fits(h, w)
    a, b = cfg.a, cfg.b
    even = (a % 2 == 0, b % 2 == 0)
    shifts = (0, 1) if cfg.centering == "symmetric" and any(even) else (0,)
    extra = shifts[-1] if even[1] else 0

    sb = ii.box_sums(b)  # top-left indexed
    sa = ii.box_sums(a)
    # first valid centre sits at b//2 on each axis
    c0 = b // 2
    ny, nx = h - b + 1 - extra, w - b + 1 - extra
    mask = np.zeros((h, w), dtype=bool)
    if ny <= 0 or nx <= 0:
        return mask

    qa, pb = cfg.ratio_den * (b * b), cfg.ratio_num * (a * a)
    off = c0 - a // 2
    inner = np.ones((ny, nx), dtype=bool)
    for dy in shifts:
        for dx in shifts:
            ay, ax = (dy, dx) if even[0] else (0, 0)
            by, bx = (dy, dx) if even[1] else (0, 0)
            win_a = sa[off + ay:off + ay + ny, off + ax:off + ax + nx]
            win_b = sb[by:by + ny, bx:bx + nx]
            inner &= qa * win_a > pb * win_b
    mask[c0:c0 + ny, c0:c0 + nx] = inner
    return mask
