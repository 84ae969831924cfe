"""Per-frame detection: luma, integral image, PCM, edges, fusion, threshold."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field

import numpy as np

from .edges import DirectionalEdgeMaps, EdgeConfig, compute_edges, edge_census
from .errors import ConfigError
from .fusion import FusionOutput, fuse
from .image_core import IntegralImage, as_gray, integral, to_intensity
from .pcm import PcmConfig, compute_pcm

REFERENCE_AREA = 320 * 320


class Decision(str, enum.Enum):
    INFORMATIVE = "informative"
    NON_INFORMATIVE = "non-informative"

    def __str__(self):
        return self.value

    @classmethod
    def parse(cls, text: str) -> "Decision":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValueError(f"unknown label {text!r}") from None


@dataclass(frozen=True)
class PipelineConfig:
    pcm: PcmConfig = field(default_factory=PcmConfig)
    edge: EdgeConfig = field(default_factory=EdgeConfig)
    area_threshold: int = 500
    scale_threshold_with_area: bool = False
    # False restricts fusion triggers to edge bits lying on the PCM run.
    lookback: bool = True

    def __post_init__(self):
        if self.area_threshold < 0:
            raise ConfigError(f"area_threshold must be >= 0, got {self.area_threshold}")

    def effective_threshold(self, height: int, width: int) -> int:
        if not self.scale_threshold_with_area:
            return self.area_threshold
        # Round half up, integers only.
        num = self.area_threshold * width * height
        return (2 * num + REFERENCE_AREA) // (2 * REFERENCE_AREA)


@dataclass(frozen=True)
class Stages:
    """Intermediate products of one detection."""

    gray: np.ndarray
    integral: IntegralImage
    pcm: np.ndarray
    edges: DirectionalEdgeMaps
    fusion: FusionOutput


@dataclass(frozen=True)
class DetectionReport:
    frame_id: str
    decision: Decision
    final_count: int
    pcm_count: int
    edge_counts: dict
    effective_threshold: int
    stages: Stages | None = field(default=None, compare=False, repr=False)

    @property
    def informative(self) -> bool:
        return self.decision is Decision.INFORMATIVE

    def to_dict(self) -> dict:
        return {
            "frame_id": self.frame_id,
            "decision": self.decision.value,
            "final_count": self.final_count,
            "pcm_count": self.pcm_count,
            "edge_counts": {k: self.edge_counts[k] for k in ("left", "right", "up", "down")},
            "effective_threshold": self.effective_threshold,
        }

    def to_json(self, indent=None) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def detect_gray(gray, cfg: PipelineConfig | None = None, frame_id: str = "",
                keep_stages: bool = False) -> DetectionReport:
    cfg = cfg or PipelineConfig()
    g = as_gray(gray)
    h, w = g.shape
    cfg.pcm.check_fits(h, w)

    ii = integral(g)
    pcm = compute_pcm(ii, cfg.pcm)
    edges = compute_edges(g, cfg.edge)
    fused = fuse(pcm, edges, lookback=cfg.lookback)

    threshold = cfg.effective_threshold(h, w)
    count = fused.final_count
    decision = Decision.INFORMATIVE if count > threshold else Decision.NON_INFORMATIVE
    stages = Stages(g, ii, pcm, edges, fused) if keep_stages else None
    return DetectionReport(
        frame_id=str(frame_id),
        decision=decision,
        final_count=count,
        pcm_count=int(np.count_nonzero(pcm)),
        edge_counts=edge_census(edges),
        effective_threshold=threshold,
        stages=stages,
    )


def detect_frame(frame, cfg: PipelineConfig | None = None, frame_id: str = "",
                 keep_stages: bool = False) -> DetectionReport:
    return detect_gray(to_intensity(frame), cfg, frame_id, keep_stages)


def detect_image(image, cfg: PipelineConfig | None = None, frame_id: str = "",
                 keep_stages: bool = False) -> DetectionReport:
    """Dispatch on array rank: 3-D arrays are RGB frames, 2-D are gray."""
    arr = np.asarray(image)
    if arr.ndim == 3:
        return detect_frame(arr, cfg, frame_id, keep_stages)
    return detect_gray(arr, cfg, frame_id, keep_stages)
