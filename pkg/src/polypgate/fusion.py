"""Fusion of the contrast mask with directional edges.

Each of the four scans walks a line of the PCM.  A run of consecutive PCM
pixels becomes supported at the first pixel where the scan is *armed* and
stays supported until the run ends.  The left-to-right scan is armed at a
pixel when, looking back along the row, the nearest horizontal edge
boundary is a ``dark_left`` edge, i.e. the pixel sits on the bright side
of a dark-to-bright transition with no bright-to-dark transition in
between.  The other three scans are the mirror images.

With ``lookback=False`` a run is supported only from an arming edge bit
that lies on the run itself; edges outside the run are ignored.

Horizontal scans accumulate into ``h_mask``, vertical scans into
``v_mask``, and the final mask is their intersection.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .edges import DirectionalEdgeMaps
from .errors import ConfigError


@dataclass(frozen=True)
class FusionOutput:
    h_mask: np.ndarray
    v_mask: np.ndarray
    final_mask: np.ndarray

    @property
    def final_count(self) -> int:
        return int(np.count_nonzero(self.final_mask))


def _positions(n: int, axis: int) -> np.ndarray:
    shape = [1, 1]
    shape[axis] = n
    return (np.arange(n, dtype=np.int32) * 4).reshape(shape)


def _scan(pcm, ahead, behind, axis, lookback):
    """One forward scan along ``axis``.

    ``ahead`` holds edges whose dark neighbour precedes the pixel in scan
    order (they arm), ``behind`` edges whose dark neighbour follows it
    (they disarm from the next pixel on).
    """
    pos = _positions(pcm.shape[axis], axis)
    if lookback:
        shifted = np.zeros_like(behind)
        if axis == 1:
            shifted[:, 1:] = behind[:, :-1]
        else:
            shifted[1:] = behind[:-1]
        # A boundary between pixels k-1 and k encodes as 4k, plus 1 if it disarms.
        code = np.where(shifted, pos + 1, np.where(ahead, pos, -1))
        last = np.maximum.accumulate(code, axis=axis)
        trigger = pcm & (last >= 0) & ((last & 1) == 0)
    else:
        trigger = pcm & ahead

    # Support persists from a trigger until the next zero PCM pixel.
    code = np.where(trigger, pos + 1, np.where(pcm, -1, pos))
    last = np.maximum.accumulate(code, axis=axis)
    return pcm & (last >= 0) & ((last & 1) == 1)


def fuse(pcm, edges: DirectionalEdgeMaps, lookback: bool = True) -> FusionOutput:
    pcm = np.asarray(pcm, dtype=bool)
    for name, plane in edges.planes().items():
        if plane.shape != pcm.shape:
            raise ConfigError(
                f"edge plane {name} has shape {plane.shape}, PCM has {pcm.shape}"
            )
    left, right = edges.dark_left, edges.dark_right
    up, down = edges.dark_up, edges.dark_down

    h_mask = _scan(pcm, left, right, 1, lookback)
    h_mask |= _scan(pcm[:, ::-1], right[:, ::-1], left[:, ::-1], 1, lookback)[:, ::-1]
    v_mask = _scan(pcm, up, down, 0, lookback)
    v_mask |= _scan(pcm[::-1], down[::-1], up[::-1], 0, lookback)[::-1]
    return FusionOutput(h_mask, v_mask, h_mask & v_mask)
