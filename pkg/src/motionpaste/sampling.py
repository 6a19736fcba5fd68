"""Stochastic selection: object count, class-balanced picks, scales, windows.

Object scale is defined as sqrt(mask_area / (H * W)), the square root of the
mask-area fraction; pasting at scale S targets a mask area of S^2 * H * W.
Per-category scale statistics are computed over every per-frame mask
occurrence in a background dataset, with the population standard deviation so
single-occurrence categories get sigma = 0 rather than NaN.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bank import Bank, InstanceFrame, InstanceSequence
from .errors import CapacityError, ConfigurationError, SchemaError, ValidationError
from .jsonio import read_json, write_json


@dataclass(frozen=True)
class CategoryScaleStats:
    category_id: int
    mu: float
    sigma: float
    sample_count: int

    def __post_init__(self):
        if self.sigma < 0:
            raise ValidationError(f"sigma must be >= 0, got {self.sigma}")
        if not 0.0 < self.mu <= 1.0:
            raise ValidationError(f"mu must be in (0, 1], got {self.mu}")
        if self.sample_count < 1:
            raise ValidationError(f"sample_count must be >= 1, got {self.sample_count}")


WINDOW_MODES = ("prefix", "random_window")
OVERFLOW_POLICIES = ("error", "pingpong")
SCALE_SAMPLING = ("per_track", "per_frame")


@dataclass(frozen=True)
class CompositionConfig:
    n_max: int = 20
    scale_clamp: tuple[float, float] = (0.05, 0.95)
    sequence_window: str = "prefix"
    overflow_policy: str = "error"
    scale_sampling: str = "per_track"

    def __post_init__(self):
        if self.n_max < 1:
            raise ConfigurationError(f"n_max must be >= 1, got {self.n_max}")
        s_min, s_max = self.scale_clamp
        if not 0.0 < s_min < s_max <= 1.0:
            raise ConfigurationError(
                f"scale clamp must satisfy 0 < min < max <= 1, got {self.scale_clamp}"
            )
        if self.sequence_window not in WINDOW_MODES:
            raise ConfigurationError(f"unknown sequence_window {self.sequence_window!r}")
        if self.overflow_policy not in OVERFLOW_POLICIES:
            raise ConfigurationError(f"unknown overflow_policy {self.overflow_policy!r}")
        if self.scale_sampling not in SCALE_SAMPLING:
            raise ConfigurationError(f"unknown scale_sampling {self.scale_sampling!r}")


def sample_num_objects(rng: np.random.Generator, cfg: CompositionConfig) -> int:
    """Number of objects to paste, uniform over {1, ..., n_max}."""
    return int(rng.integers(1, cfg.n_max + 1))


def sample_categories(rng: np.random.Generator, bank: Bank,
                      n_objects: int) -> list[tuple[int, str]]:
    """Class-balanced draws: uniform over categories, then over sequences.

    The category marginal stays uniform no matter how unevenly sequences are
    distributed; draws are independent, so repeats are allowed.
    """
    categories = sorted(cat for cat, seqs in bank.items() if len(seqs) > 0)
    if not categories:
        raise ConfigurationError("instance bank has no categories with surviving sequences")
    picks = []
    for _ in range(n_objects):
        cat = categories[int(rng.integers(0, len(categories)))]
        sequences = bank[cat]
        seq = sequences[int(rng.integers(0, len(sequences)))]
        picks.append((cat, seq.sequence_id))
    return picks


def mask_scale(mask_area: int, height: int, width: int) -> float:
    return math.sqrt(mask_area / (height * width))


def compute_scale_stats(dataset) -> dict[int, CategoryScaleStats]:
    """Per-category mean / population-std of per-occurrence object scales.

    Every visible per-frame mask counts as one occurrence. Categories with no
    occurrences are simply absent from the result.
    """
    scales: dict[int, list[float]] = {}
    for video in dataset:
        height, width = video.height, video.width
        for track in video.tracks:
            for mask in track.segmentations:
                if mask is None:
                    continue
                area = int(mask.sum())
                if area == 0:
                    continue
                scales.setdefault(track.category_id, []).append(
                    mask_scale(area, height, width)
                )
    stats = {}
    for cat_id, values in scales.items():
        arr = np.asarray(values, dtype=np.float64)
        stats[cat_id] = CategoryScaleStats(
            category_id=cat_id,
            mu=float(arr.mean()),
            sigma=float(arr.std()),
            sample_count=len(values),
        )
    return stats


def pooled_scale_stats(stats: dict[int, CategoryScaleStats]) -> Optional[CategoryScaleStats]:
    """Merge per-category stats into one global fallback distribution."""
    if not stats:
        return None
    total = sum(s.sample_count for s in stats.values())
    mean = sum(s.mu * s.sample_count for s in stats.values()) / total
    # Combine via the law of total variance over category groups.
    second = sum((s.sigma**2 + s.mu**2) * s.sample_count for s in stats.values()) / total
    var = max(second - mean**2, 0.0)
    return CategoryScaleStats(category_id=-1, mu=mean, sigma=math.sqrt(var), sample_count=total)


def sample_scale(rng: np.random.Generator, stats: CategoryScaleStats,
                 cfg: CompositionConfig) -> float:
    """Draw S ~ Normal(mu, sigma^2), clamped into the configured range."""
    s_min, s_max = cfg.scale_clamp
    value = float(rng.normal(stats.mu, stats.sigma))
    return min(max(value, s_min), s_max)


def select_instance_window(sequence: InstanceSequence, n_frames: int,
                           cfg: CompositionConfig,
                           rng: Optional[np.random.Generator] = None) -> list[InstanceFrame]:
    """Pick exactly `n_frames` consecutive-looking frames from a sequence.

    Sequences long enough yield a contiguous window (prefix, or random start
    under random_window). Shorter sequences either raise CapacityError or are
    extended by ping-pong reflection (1..L, L-1..1, 2..L, ...) per the
    overflow policy.
    """
    length = sequence.length
    if n_frames < 1:
        raise ValidationError(f"window must cover at least one frame, got {n_frames}")
    if length >= n_frames:
        if cfg.sequence_window == "random_window":
            if rng is None:
                raise ValidationError("random_window selection requires an rng")
            start = int(rng.integers(0, length - n_frames + 1))
        else:
            start = 0
        return sequence.frames[start:start + n_frames]

    if cfg.overflow_policy == "error":
        raise CapacityError(
            f"sequence {sequence.sequence_id!r} has {length} frames, "
            f"needs {n_frames}; set overflow policy to pingpong to extend"
        )
    return [sequence.frames[_pingpong_index(j, length)] for j in range(n_frames)]


def _pingpong_index(j: int, length: int) -> int:
    if length == 1:
        return 0
    period = 2 * length - 2
    m = j % period
    return m if m < length else period - m


def save_scale_stats(stats: dict[int, CategoryScaleStats], path) -> None:
    """Cache stats as JSON keyed by category_id (sample_count kept for audit)."""
    payload = {
        "categories": {
            str(cid): {"mu": s.mu, "sigma": s.sigma, "sample_count": s.sample_count}
            for cid, s in stats.items()
        }
    }
    write_json(payload, path)


def load_scale_stats(path) -> dict[int, CategoryScaleStats]:
    try:
        data = read_json(path)
    except ValueError as exc:  # json decode failure
        raise SchemaError(f"scale stats file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict) or not isinstance(data.get("categories"), dict):
        raise SchemaError(f"scale stats file {path} must hold a 'categories' object")
    stats = {}
    for key, entry in data["categories"].items():
        try:
            cid = int(key)
            stats[cid] = CategoryScaleStats(
                category_id=cid,
                mu=float(entry["mu"]),
                sigma=float(entry["sigma"]),
                sample_count=int(entry["sample_count"]),
            )
        except (TypeError, KeyError, ValueError) as exc:
            raise SchemaError(
                f"scale stats file {path}: malformed entry for category {key!r}: {exc}"
            ) from exc
    return stats
