"""Instance-bank ingestion and quality filtering.

A bank is a directory of segmented object sequences, one per generated clip:

    <bank>/<category_id>/<sequence_id>/crops/<i:03>.png
    <bank>/<category_id>/<sequence_id>/masks/<i:03>.png
    <bank>/<category_id>/<sequence_id>/scores.txt     (optional, one per frame)

Filtering keeps a frame when its relevance score (if any) clears the threshold
and its mask occupies an acceptable fraction of the source frame; a sequence
survives only if every one of its frames passes, since a track with holes
cannot be pasted coherently.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np
from PIL import Image

from .errors import DatasetLoadError, SchemaError, ValidationError

KEEP = "keep"
DROP_LOW_SCORE = "low_score"
DROP_AREA_SMALL = "area_too_small"
DROP_AREA_LARGE = "area_too_large"
DROP_REASONS = (DROP_LOW_SCORE, DROP_AREA_SMALL, DROP_AREA_LARGE)

SCORES_FILENAME = "scores.txt"


@dataclass
class InstanceFrame:
    """One frame of a segmented instance: crop, mask, and optional score."""

    crop: np.ndarray
    mask: np.ndarray
    relevance_score: Optional[float] = None

    def __post_init__(self):
        if self.crop.shape[:2] != self.mask.shape:
            raise ValidationError(
                f"crop {self.crop.shape[:2]} and mask {self.mask.shape} sizes differ"
            )
        if self.mask.dtype != np.bool_:
            raise ValidationError(f"mask must be boolean, got {self.mask.dtype}")
        if self.mask_area < 1:
            raise ValidationError("mask has no foreground pixels")
        if self.relevance_score is not None and not 0.0 <= self.relevance_score <= 1.0:
            raise ValidationError(f"relevance score {self.relevance_score} outside [0, 1]")

    @property
    def mask_area(self) -> int:
        return int(self.mask.sum())

    @property
    def source_area(self) -> int:
        h, w = self.mask.shape
        return h * w

    @property
    def area_fraction(self) -> float:
        return self.mask_area / self.source_area


@dataclass
class InstanceSequence:
    """A segmented object track from one generated clip."""

    sequence_id: str
    category_id: int
    frames: list[InstanceFrame]

    def __post_init__(self):
        if len(self.frames) < 1:
            raise ValidationError(f"sequence {self.sequence_id!r} has no frames")

    @property
    def length(self) -> int:
        return len(self.frames)


@dataclass(frozen=True)
class FilterConfig:
    score_threshold: float = 0.21
    area_min_fraction: float = 0.05
    area_max_fraction: float = 0.95

    def __post_init__(self):
        if not 0.0 <= self.score_threshold <= 1.0:
            raise ValidationError(
                f"score threshold must be in [0, 1], got {self.score_threshold}"
            )
        if not 0.0 <= self.area_min_fraction < self.area_max_fraction <= 1.0:
            raise ValidationError(
                f"area bounds must satisfy 0 <= min < max <= 1, got "
                f"({self.area_min_fraction}, {self.area_max_fraction})"
            )


Bank = dict[int, list[InstanceSequence]]


def _read_image(path: Path, mode: str) -> np.ndarray:
    if not path.is_file():
        raise DatasetLoadError(f"missing file: {path}")
    with Image.open(path) as img:
        return np.asarray(img.convert(mode))


def _load_sequence(cat_id: int, seq_dir: Path) -> InstanceSequence:
    seq_id = seq_dir.name
    crops_dir = seq_dir / "crops"
    masks_dir = seq_dir / "masks"
    if not crops_dir.is_dir():
        raise SchemaError(f"sequence {seq_id!r}: missing crops directory {crops_dir}")
    if not masks_dir.is_dir():
        raise SchemaError(f"sequence {seq_id!r}: missing masks directory {masks_dir}")
    crop_files = sorted(crops_dir.glob("*.png"))
    if not crop_files:
        raise SchemaError(f"sequence {seq_id!r}: no crop frames in {crops_dir}")

    scores: list[Optional[float]] = [None] * len(crop_files)
    scores_path = seq_dir / SCORES_FILENAME
    if scores_path.is_file():
        lines = scores_path.read_text(encoding="utf-8").split()
        if len(lines) != len(crop_files):
            raise SchemaError(
                f"sequence {seq_id!r}: {len(lines)} scores for {len(crop_files)} frames"
            )
        try:
            scores = [float(line) for line in lines]
        except ValueError as exc:
            raise SchemaError(f"sequence {seq_id!r}: malformed score line: {exc}") from exc

    frames = []
    for i, crop_path in enumerate(crop_files):
        mask_path = masks_dir / crop_path.name
        crop = _read_image(crop_path, "RGB")
        mask = _read_image(mask_path, "L") > 0
        if crop.shape[:2] != mask.shape:
            raise SchemaError(
                f"sequence {seq_id!r} frame {i}: crop {crop.shape[:2]} vs mask {mask.shape}"
            )
        try:
            frames.append(InstanceFrame(crop=crop, mask=mask, relevance_score=scores[i]))
        except ValidationError as exc:
            raise SchemaError(f"sequence {seq_id!r} frame {i}: {exc}") from exc
    return InstanceSequence(sequence_id=seq_id, category_id=cat_id, frames=frames)


def load_instance_bank(root_path: Path | str) -> Bank:
    """Load all sequences grouped by category, lexicographic by sequence_id."""
    root = Path(root_path)
    if not root.is_dir():
        raise DatasetLoadError(f"missing bank directory: {root}")
    bank: Bank = {}
    for cat_dir in sorted(root.iterdir(), key=lambda p: p.name):
        if not cat_dir.is_dir():
            continue
        try:
            cat_id = int(cat_dir.name)
        except ValueError as exc:
            raise SchemaError(
                f"bank entry {cat_dir.name!r} is not a numeric category directory"
            ) from exc
        sequences = [
            _load_sequence(cat_id, seq_dir)
            for seq_dir in sorted(cat_dir.iterdir(), key=lambda p: p.name)
            if seq_dir.is_dir()
        ]
        bank[cat_id] = sequences
    return bank


def filter_frame(frame: InstanceFrame, cfg: FilterConfig) -> str:
    """Classify one frame: KEEP or one of the DROP_* reasons.

    Score and area bounds are inclusive; an absent score passes the score
    check so banks without sidecars remain usable.
    """
    score = frame.relevance_score
    if score is not None and score < cfg.score_threshold:
        return DROP_LOW_SCORE
    fraction = frame.area_fraction
    if fraction < cfg.area_min_fraction:
        return DROP_AREA_SMALL
    if fraction > cfg.area_max_fraction:
        return DROP_AREA_LARGE
    return KEEP


def filter_bank(bank: Bank, cfg: FilterConfig, min_survivors: int = 1) -> tuple[Bank, dict]:
    """Drop every sequence containing at least one failing frame.

    Returns the surviving bank and a report with per-category, per-reason
    frame drop counts; categories left with fewer than `min_survivors`
    sequences are flagged.
    """
    filtered: Bank = {}
    report: dict = {"categories": {}, "min_survivors": min_survivors}
    for cat_id in sorted(bank):
        sequences = bank[cat_id]
        drops = {reason: 0 for reason in DROP_REASONS}
        kept = []
        for seq in sequences:
            verdicts = [filter_frame(f, cfg) for f in seq.frames]
            if all(v == KEEP for v in verdicts):
                kept.append(seq)
            else:
                for v in verdicts:
                    if v != KEEP:
                        drops[v] += 1
        filtered[cat_id] = kept
        report["categories"][str(cat_id)] = {
            "sequences_total": len(sequences),
            "sequences_kept": len(kept),
            "sequences_dropped": len(sequences) - len(kept),
            "frame_drops": drops,
            "below_min_survivors": len(kept) < min_survivors,
        }
    return filtered, report
