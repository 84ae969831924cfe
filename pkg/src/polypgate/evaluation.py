"""Labeled evaluation, confusion matrices and synthetic polyp phantoms."""

from __future__ import annotations

import csv
import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import ConfigError, EvaluationError, LabelsError, PolypGateError
from .netpbm import read as read_netpbm
from .netpbm import write as write_netpbm
from .pipeline import Decision, DetectionReport, PipelineConfig, detect_image

log = logging.getLogger(__name__)

NA = "n/a"


# ---------------------------------------------------------------- labels


@dataclass(frozen=True)
class LabeledEntry:
    path: Path
    label: Decision
    # Path as written in the CSV; used as the report's frame id.
    name: str = ""

    @property
    def frame_id(self) -> str:
        return self.name or str(self.path)


@dataclass(frozen=True)
class LabeledSet:
    entries: tuple[LabeledEntry, ...] = ()

    def __post_init__(self):
        seen = set()
        for entry in self.entries:
            if entry.path in seen:
                raise LabelsError(f"duplicate path {entry.path}")
            seen.add(entry.path)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def load_labels(path: str | os.PathLike) -> LabeledSet:
    """Parse a ``path,label`` CSV.  Relative image paths resolve against the CSV's folder."""
    path = Path(path)
    base = path.parent
    entries = []
    first_seen = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header] != ["path", "label"]:
            raise LabelsError(f"expected header 'path,label', got {header!r}", line=1)
        for row in reader:
            line = reader.line_num
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != 2:
                raise LabelsError(f"expected 2 fields, got {len(row)}", line=line)
            raw_path, raw_label = row[0].strip(), row[1]
            if not raw_path:
                raise LabelsError("empty path", line=line)
            try:
                label = Decision.parse(raw_label)
            except ValueError as exc:
                raise LabelsError(str(exc), line=line) from None
            image_path = Path(raw_path)
            if not image_path.is_absolute():
                image_path = base / image_path
            if image_path in first_seen:
                raise LabelsError(
                    f"duplicate path {raw_path!r} (first on line {first_seen[image_path]})",
                    line=line,
                )
            first_seen[image_path] = line
            entries.append(LabeledEntry(image_path, label, raw_path))
    return LabeledSet(tuple(entries))


def write_labels(path: str | os.PathLike, rows: Iterable[tuple[str, Decision]]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["path", "label"])
        for name, label in rows:
            writer.writerow([name, Decision(label).value])


# ------------------------------------------------------- confusion matrix


@dataclass(frozen=True)
class ConfusionMatrix:
    """Frame-level 2x2 matrix; rows are our result, columns the ground truth.

    Rates are normalised per ground-truth column, so ``tp_rate + fn_rate``
    and ``fp_rate + tn_rate`` are each 1 when the column is non-empty.  An
    empty column gives ``None`` rates (serialised as ``"n/a"``).
    """

    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[Decision, Decision]]) -> "ConfusionMatrix":
        """Build from ``(predicted, truth)`` pairs."""
        tp = fp = fn = tn = 0
        for predicted, truth in pairs:
            pos = predicted is Decision.INFORMATIVE
            if truth is Decision.INFORMATIVE:
                tp += pos
                fn += not pos
            else:
                fp += pos
                tn += not pos
        return cls(tp, fp, fn, tn)

    @staticmethod
    def _rate(num, den):
        return Fraction(num, den) if den else None

    @property
    def tp_rate(self) -> Fraction | None:
        return self._rate(self.tp, self.tp + self.fn)

    @property
    def fn_rate(self) -> Fraction | None:
        return self._rate(self.fn, self.tp + self.fn)

    @property
    def fp_rate(self) -> Fraction | None:
        return self._rate(self.fp, self.fp + self.tn)

    @property
    def tn_rate(self) -> Fraction | None:
        return self._rate(self.tn, self.fp + self.tn)

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    def to_dict(self) -> dict:
        out = {"tp": self.tp, "fp": self.fp, "fn": self.fn, "tn": self.tn}
        for name in ("tp_rate", "fp_rate", "fn_rate", "tn_rate"):
            rate = getattr(self, name)
            out[name] = NA if rate is None else float(rate)
        return out

    def to_json(self, indent=None) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def to_table(self) -> str:
        """Plain-text table in the classic informative / non-informative layout."""

        def cell(rate):
            return NA if rate is None else f"{float(rate):.2f}"

        rows = [
            ("Our result \\ Real", "Informative (true)", "Non-informative (false)"),
            ("Informative (positive)", cell(self.tp_rate), cell(self.fp_rate)),
            ("Non-informative (negative)", cell(self.fn_rate), cell(self.tn_rate)),
        ]
        w0 = max(len(r[0]) for r in rows)
        w1 = max(len(r[1]) for r in rows)
        w2 = max(len(r[2]) for r in rows)
        lines = [f"{a:<{w0}}  {b:>{w1}}  {c:>{w2}}" for a, b, c in rows]
        return "\n".join(lines)


@dataclass
class Evaluation:
    matrix: ConfusionMatrix
    reports: list[DetectionReport] = field(default_factory=list)
    labels: list[Decision] = field(default_factory=list)
    failures: list[tuple[Path, str]] = field(default_factory=list)


def load_image(path: str | os.PathLike) -> np.ndarray:
    """Read a PPM/PGM; PNG is accepted when Pillow is installed."""
    path = Path(path)
    if path.suffix.lower() == ".png":
        try:
            from PIL import Image
        except ImportError:  # pragma: no cover - optional dependency
            raise PolypGateError("PNG input needs Pillow (pip install artifact[png])") from None
        with Image.open(path) as im:
            return np.asarray(im.convert("RGB"))
    return read_netpbm(path)


def evaluate(labels: LabeledSet, cfg: PipelineConfig | None = None, jobs: int = 1) -> Evaluation:
    """Run the detector over a labeled set.

    Entries that fail to load or process are collected in ``failures`` and
    left out of the matrix; :class:`EvaluationError` is raised only when
    every entry fails.
    """
    cfg = cfg or PipelineConfig()

    def run(entry: LabeledEntry):
        try:
            image = load_image(entry.path)
            return detect_image(image, cfg, frame_id=entry.frame_id), None
        except (OSError, PolypGateError) as exc:
            return None, f"{type(exc).__name__}: {exc}"

    entries = list(labels)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run, entries))
    else:
        results = [run(e) for e in entries]

    out = Evaluation(ConfusionMatrix())
    for entry, (report, error) in zip(entries, results):
        if report is None:
            log.warning("skipping %s: %s", entry.path, error)
            out.failures.append((entry.path, error))
            continue
        out.reports.append(report)
        out.labels.append(entry.label)
    if entries and not out.reports:
        raise EvaluationError(f"all {len(entries)} entries failed; first: {out.failures[0][1]}")
    out.matrix = ConfusionMatrix.from_pairs((r.decision, t) for r, t in zip(out.reports, out.labels))
    return out


# ---------------------------------------------------------------- phantoms


@dataclass(frozen=True)
class PhantomSpec:
    """Synthetic frame: bright dome on a flat background, ringed by a dark band.

    The dome falls from ``peak`` at the centre towards ``background`` as
    ``(1 - d/radius)**2``.  Pixels with ``radius <= d < radius + ring_width``
    take the ring intensity.  ``center`` defaults to the image centre.
    """

    width: int = 320
    height: int = 320
    background: int = 90
    radius: int = 40
    peak: int = 230
    ring: int = 30
    ring_width: int = 3
    noise: int = 0
    seed: int = 0
    center: tuple[int, int] | None = None
    tau2: int = 100
    margin: int = 32

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ConfigError(f"invalid phantom size {self.width}x{self.height}")
        for name in ("background", "peak", "ring", "noise"):
            value = getattr(self, name)
            if not 0 <= value <= 255:
                raise ConfigError(f"{name} must lie in [0, 255], got {value}")
        if self.radius < 0 or self.ring_width < 0 or self.margin < 0:
            raise ConfigError("radius, ring_width and margin must be non-negative")
        if self.radius > 0 and not self.peak > self.background:
            raise ConfigError(f"peak {self.peak} must exceed background {self.background}")
        if self.ring_width > 0:
            if not self.background > self.ring:
                raise ConfigError(f"ring {self.ring} must be darker than background {self.background}")
            if not self.ring < self.tau2:
                raise ConfigError(f"ring {self.ring} must be below tau2 {self.tau2}")
        extent = self.radius + self.ring_width
        if extent > 0:
            cx, cy = self.resolved_center
            reach = extent + self.margin
            if cx - reach < 0 or cy - reach < 0 or cx + reach >= self.width or cy + reach >= self.height:
                raise ConfigError(
                    f"polyp of extent {extent} at ({cx}, {cy}) plus margin {self.margin} "
                    f"does not fit a {self.width}x{self.height} image"
                )

    @property
    def resolved_center(self) -> tuple[int, int]:
        if self.center is None:
            return self.width // 2, self.height // 2
        return tuple(self.center)

    @classmethod
    def from_dict(cls, data: dict) -> "PhantomSpec":
        data = dict(data)
        if data.get("center") is not None:
            data["center"] = tuple(data["center"])
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"unknown phantom fields: {sorted(unknown)}")
        return cls(**data)


def generate_phantom(spec: PhantomSpec) -> np.ndarray:
    h, w = spec.height, spec.width
    cx, cy = spec.resolved_center
    y, x = np.mgrid[0:h, 0:w]
    d2 = (x - cx) ** 2 + (y - cy) ** 2
    img = np.full((h, w), spec.background, dtype=np.int32)

    r = spec.radius
    if r > 0:
        inside = d2 < r * r
        falloff = np.clip(1.0 - np.sqrt(d2[inside]) / r, 0.0, 1.0) ** 2
        img[inside] = spec.background + np.floor((spec.peak - spec.background) * falloff + 0.5).astype(np.int32)
    if spec.ring_width > 0:
        outer = r + spec.ring_width
        img[(d2 >= r * r) & (d2 < outer * outer)] = spec.ring

    if spec.noise > 0:
        rng = np.random.default_rng(spec.seed)
        img += rng.integers(-spec.noise, spec.noise + 1, size=img.shape, dtype=np.int32)
    return np.clip(img, 0, 255).astype(np.uint8)


# The pinned benchmark suite.  Changing any value here changes every
# downstream expected number.
SUITE_SEED = 20170501
SUITE_SIZE = 320
SUITE_POSITIVES = 100
SUITE_NEGATIVES = 100


@dataclass(frozen=True)
class SuiteItem:
    name: str
    image: np.ndarray
    label: Decision
    spec: PhantomSpec


def phantom_suite(seed: int = SUITE_SEED, positives: int = SUITE_POSITIVES,
                  negatives: int = SUITE_NEGATIVES, size: int = SUITE_SIZE) -> list[SuiteItem]:
    """Deterministic mix of phantom polyps and flat or noisy negatives.

    Positives: radius 25-60, background 50-80, peak at least background +
    110, ring 10-39 (always below background and tau2), ring width 2-6,
    noise amplitude 0-10, centre jittered by up to 20 px.
    Negatives: alternately constant frames and uniform noise of amplitude
    1-20 around a level in 20-235.
    """
    rng = np.random.default_rng(seed)
    items = []
    for i in range(positives):
        radius = int(rng.integers(25, 61))
        background = int(rng.integers(50, 81))
        peak = int(rng.integers(background + 110, 251))
        ring = int(rng.integers(10, min(40, background - 10)))
        ring_width = int(rng.integers(2, 7))
        noise = int(rng.integers(0, 11))
        jx, jy = (int(v) for v in rng.integers(-20, 21, size=2))
        spec = PhantomSpec(
            width=size, height=size, background=background, radius=radius, peak=peak,
            ring=ring, ring_width=ring_width, noise=noise, seed=int(rng.integers(2**31)),
            center=(size // 2 + jx, size // 2 + jy),
        )
        items.append(SuiteItem(f"pos_{i:03d}", generate_phantom(spec), Decision.INFORMATIVE, spec))
    for i in range(negatives):
        level = int(rng.integers(0, 256))
        noise = 0
        if i % 2:
            level = int(rng.integers(20, 236))
            noise = int(rng.integers(1, 21))
        spec = PhantomSpec(
            width=size, height=size, background=level, radius=0, ring_width=0,
            noise=noise, seed=int(rng.integers(2**31)),
        )
        items.append(SuiteItem(f"neg_{i:03d}", generate_phantom(spec), Decision.NON_INFORMATIVE, spec))
    return items


def write_suite(directory: str | os.PathLike, items: list[SuiteItem] | None = None) -> Path:
    """Write suite PGMs plus ``labels.csv``; returns the labels path."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    items = phantom_suite() if items is None else items
    for item in items:
        write_netpbm(directory / f"{item.name}.pgm", item.image)
    labels = directory / "labels.csv"
    write_labels(labels, ((f"{item.name}.pgm", item.label) for item in items))
    return labels
