"""Matplotlib figures for detection, evaluation and stream reports.

Figures are built on :class:`matplotlib.figure.Figure` directly so no
global backend or pyplot state is touched.  PNG metadata is stripped to
keep files byte-stable across runs.
"""

from __future__ import annotations

import os

import numpy as np
from matplotlib.colors import ListedColormap
from matplotlib.figure import Figure

# left, right, up, down
EDGE_COLORS = np.array(
    [[230, 60, 50], [40, 120, 230], [250, 190, 40], [60, 180, 90]], dtype=np.uint8
)
DECISION_COLORS = {"informative": "#c0392b", "non-informative": "#7f8c8d", "skipped": "#f1c40f"}
_MASK_CMAP = ListedColormap(["black", "white"])

# Fixed metadata keeps output independent of the matplotlib version string.
_PNG_METADATA = {"Software": None}


def _save(fig: Figure, path: str | os.PathLike, dpi: int = 100) -> None:
    fig.savefig(path, dpi=dpi, metadata=_PNG_METADATA)


def _style(ax, title):
    ax.set_title(title, fontsize=10)
    ax.set_xticks([])
    ax.set_yticks([])


def edge_overlay(gray: np.ndarray, edges) -> np.ndarray:
    """RGB rendering of the gray image with each edge direction in its own colour."""
    rgb = np.repeat(np.asarray(gray, dtype=np.uint8)[..., None], 3, axis=2) // 2
    for color, plane in zip(EDGE_COLORS, edges.planes().values()):
        rgb[plane] = color
    return rgb


def plot_stages(report, path: str | os.PathLike) -> None:
    """Six-panel figure: input, PCM, edges, horizontal, vertical and final masks."""
    stages = report.stages
    if stages is None:
        raise ValueError("report was produced without keep_stages=True")
    fig = Figure(figsize=(9, 6.2))
    axes = fig.subplots(2, 3)
    panels = [
        ("intensity", stages.gray, "gray"),
        (f"PCM ({report.pcm_count})", stages.pcm, _MASK_CMAP),
        ("edges", edge_overlay(stages.gray, stages.edges), None),
        ("horizontal mask", stages.fusion.h_mask, _MASK_CMAP),
        ("vertical mask", stages.fusion.v_mask, _MASK_CMAP),
        (f"final ({report.final_count})", stages.fusion.final_mask, _MASK_CMAP),
    ]
    for ax, (title, img, cmap) in zip(axes.flat, panels):
        if cmap is None:
            ax.imshow(img, interpolation="nearest")
        else:
            ax.imshow(img, cmap=cmap, vmin=0, vmax=255 if cmap == "gray" else 1, interpolation="nearest")
        _style(ax, title)
    fig.suptitle(f"{report.frame_id or 'frame'}: {report.decision.value}", fontsize=11)
    fig.tight_layout()
    _save(fig, path)


def plot_confusion(matrix, path: str | os.PathLike) -> None:
    """Column-normalised confusion matrix as an annotated heat map."""
    rates = [[matrix.tp_rate, matrix.fp_rate], [matrix.fn_rate, matrix.tn_rate]]
    counts = [[matrix.tp, matrix.fp], [matrix.fn, matrix.tn]]
    values = np.array([[np.nan if r is None else float(r) for r in row] for row in rates])

    fig = Figure(figsize=(5, 4.2))
    ax = fig.subplots()
    ax.imshow(values, cmap="Blues", vmin=0, vmax=1)
    for i in range(2):
        for j in range(2):
            r = rates[i][j]
            text = "n/a" if r is None else f"{float(r):.2f}"
            shade = "white" if r is not None and float(r) > 0.6 else "black"
            ax.text(j, i, f"{text}\n(n={counts[i][j]})", ha="center", va="center", color=shade)
    ax.set_xticks([0, 1], ["informative", "non-informative"])
    ax.set_yticks([0, 1], ["informative", "non-informative"])
    ax.set_xlabel("ground truth")
    ax.set_ylabel("detector")
    fig.tight_layout()
    _save(fig, path)


def plot_stream(stats, threshold: int, path: str | os.PathLike) -> None:
    """Final-mask count per frame against the decision threshold."""
    fig = Figure(figsize=(8, 3.2))
    ax = fig.subplots()
    xs = np.arange(len(stats.decisions))
    heights = [d.final_count or 0 for d in stats.decisions]
    colors = [DECISION_COLORS.get(d.decision, "black") for d in stats.decisions]
    ax.bar(xs, heights, color=colors, width=0.8)
    ax.axhline(threshold, color="black", lw=1, ls="--")
    ax.set_xlabel("frame")
    ax.set_ylabel("final mask pixels")
    ratio = stats.transmission_ratio
    label = "n/a" if ratio is None else f"{ratio.numerator}/{ratio.denominator}"
    ax.set_title(f"transmitted {stats.frames_transmitted} of {stats.frames_total} ({label})", fontsize=10)
    ax.set_xlim(-0.5, max(len(xs), 1) - 0.5)
    fig.tight_layout()
    _save(fig, path)
