"""Dark-sided directional edges.

An edge bit is placed on the bright pixel ``i`` when one of its
4-connected neighbours ``j`` satisfies ``Im(i) > Im(j) + tau1`` and
``Im(j) < tau2``.  Each neighbour direction gets its own plane, named after
the side the dark neighbour sits on.  "Up" is the smaller row index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .image_core import as_gray

DIRECTIONS = ("left", "right", "up", "down")


@dataclass(frozen=True)
class EdgeConfig:
    tau1: int = 2
    tau2: int = 100

    def __post_init__(self):
        for name in ("tau1", "tau2"):
            value = getattr(self, name)
            if not 0 <= value <= 255:
                raise ConfigError(f"{name} must lie in [0, 255], got {value}")


@dataclass(frozen=True)
class DirectionalEdgeMaps:
    dark_left: np.ndarray
    dark_right: np.ndarray
    dark_up: np.ndarray
    dark_down: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.dark_left.shape

    def planes(self) -> dict[str, np.ndarray]:
        return {
            "left": self.dark_left,
            "right": self.dark_right,
            "up": self.dark_up,
            "down": self.dark_down,
        }

    def any(self) -> np.ndarray:
        return self.dark_left | self.dark_right | self.dark_up | self.dark_down


def _step(bright: np.ndarray, dark: np.ndarray, cfg: EdgeConfig) -> np.ndarray:
    return (bright > dark + cfg.tau1) & (dark < cfg.tau2)


def compute_edges(gray, cfg: EdgeConfig | None = None) -> DirectionalEdgeMaps:
    cfg = cfg or EdgeConfig()
    g = as_gray(gray).astype(np.int16)
    h, w = g.shape
    left = np.zeros((h, w), dtype=bool)
    right = np.zeros((h, w), dtype=bool)
    up = np.zeros((h, w), dtype=bool)
    down = np.zeros((h, w), dtype=bool)
    left[:, 1:] = _step(g[:, 1:], g[:, :-1], cfg)
    right[:, :-1] = _step(g[:, :-1], g[:, 1:], cfg)
    up[1:, :] = _step(g[1:, :], g[:-1, :], cfg)
    down[:-1, :] = _step(g[:-1, :], g[1:, :], cfg)
    return DirectionalEdgeMaps(left, right, up, down)


def edge_census(maps: DirectionalEdgeMaps) -> dict[str, int]:
    """Set-bit count per direction, keyed ``left, right, up, down``."""
    return {name: int(np.count_nonzero(plane)) for name, plane in maps.planes().items()}
