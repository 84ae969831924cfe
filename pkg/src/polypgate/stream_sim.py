"""Gating-loop simulation over an ordered frame sequence.

Frames are consumed one at a time; only the per-frame decision survives,
so memory stays bounded by a single frame and its masks.
"""

from __future__ import annotations

import json
import logging
import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Iterator, Union

import numpy as np

from .errors import ImageFormatError, PolypGateError
from .evaluation import load_image
from .pipeline import Decision, PipelineConfig, detect_image

log = logging.getLogger(__name__)

SKIPPED = "skipped"
FRAME_SUFFIXES = (".pgm", ".ppm")

FrameLike = Union[np.ndarray, Callable[[], np.ndarray]]


@dataclass(frozen=True)
class FrameDecision:
    frame_id: str
    decision: str
    final_count: int | None = None
    error: str | None = None

    def to_dict(self) -> dict:
        out = {"frame_id": self.frame_id, "decision": self.decision, "final_count": self.final_count}
        if self.error is not None:
            out["error"] = self.error
        return out


@dataclass
class StreamStats:
    bytes_per_frame: int
    decisions: list[FrameDecision] = field(default_factory=list)

    @property
    def frames_total(self) -> int:
        return len(self.decisions)

    @property
    def frames_transmitted(self) -> int:
        return sum(d.decision == Decision.INFORMATIVE.value for d in self.decisions)

    @property
    def frames_skipped(self) -> int:
        return sum(d.decision == SKIPPED for d in self.decisions)

    @property
    def frames_dropped(self) -> int:
        return self.frames_total - self.frames_transmitted - self.frames_skipped

    @property
    def transmission_ratio(self) -> Fraction | None:
        if not self.frames_total:
            return None
        return Fraction(self.frames_transmitted, self.frames_total)

    @property
    def bytes_saved(self) -> int:
        return self.frames_dropped * self.bytes_per_frame

    def to_dict(self) -> dict:
        ratio = self.transmission_ratio
        return {
            "frames_total": self.frames_total,
            "frames_transmitted": self.frames_transmitted,
            "frames_dropped": self.frames_dropped,
            "frames_skipped": self.frames_skipped,
            "transmission_ratio": "n/a" if ratio is None else f"{ratio.numerator}/{ratio.denominator}",
            "transmission_ratio_value": "n/a" if ratio is None else float(ratio),
            "bytes_per_frame": self.bytes_per_frame,
            "bytes_saved": self.bytes_saved,
            "decisions": [d.to_dict() for d in self.decisions],
        }

    def to_json(self, indent=None) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def run_stream(frames: Iterable[tuple[str, FrameLike]], cfg: PipelineConfig | None = None,
               bytes_per_frame: int = 320 * 320 * 3) -> StreamStats:
    """Gate each ``(frame_id, frame)`` in order.

    ``frame`` may be an array or a zero-argument loader; loader and
    detection errors turn into ``skipped`` entries instead of aborting.
    """
    if bytes_per_frame < 0:
        raise ValueError(f"bytes_per_frame must be >= 0, got {bytes_per_frame}")
    cfg = cfg or PipelineConfig()
    stats = StreamStats(bytes_per_frame)
    for frame_id, frame in frames:
        try:
            image = frame() if callable(frame) else frame
            report = detect_image(image, cfg, frame_id=frame_id)
        except (OSError, PolypGateError) as exc:
            log.warning("frame %s skipped: %s", frame_id, exc)
            stats.decisions.append(FrameDecision(frame_id, SKIPPED, None, f"{type(exc).__name__}: {exc}"))
            continue
        stats.decisions.append(FrameDecision(frame_id, report.decision.value, report.final_count))
    return stats


def _natural_key(path: Path):
    parts = re.split(r"(\d+)", path.name)
    return [int(p) if p.isdigit() else p for p in parts]


def directory_frames(directory: str | os.PathLike) -> Iterator[tuple[str, Callable[[], np.ndarray]]]:
    """PPM/PGM files of a folder in natural numeric order, loaded lazily."""
    directory = Path(directory)
    if not directory.is_dir():
        raise ImageFormatError(f"{directory} is not a directory")
    paths = sorted((p for p in directory.iterdir() if p.suffix.lower() in FRAME_SUFFIXES), key=_natural_key)
    for path in paths:
        yield path.name, (lambda p=path: load_image(p))


def manifest_entries(manifest: str | os.PathLike) -> list[tuple[str, Path]]:
    """``(entry, path)`` per non-blank, non-``#`` line; paths resolve against the manifest's folder."""
    manifest = Path(manifest)
    with open(manifest, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    out = []
    for raw in lines:
        entry = raw.strip()
        if not entry or entry.startswith("#"):
            continue
        path = Path(entry)
        out.append((entry, path if path.is_absolute() else manifest.parent / path))
    return out


def manifest_frames(manifest: str | os.PathLike) -> Iterator[tuple[str, Callable[[], np.ndarray]]]:
    for entry, path in manifest_entries(manifest):
        yield entry, (lambda p=path: load_image(p))
