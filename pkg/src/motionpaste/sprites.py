"""Procedural sprite fixtures: instance banks and background videos.

Everything here exists to make the pipeline testable without any generative
model. Sprites are morphing polygons filled with sentinel colors chosen so
that no two tracks share a color and no sprite color can collide with the
gray-gradient backgrounds (sentinel red and green channels always differ;
gradient pixels always have all channels equal). Ground truth (colors, areas)
is returned in memory so tests can verify loaders and compositions against
an independent record rather than re-reading what was written.
"""

from __future__ import annotations

import logging
import math
from pathlib import Path

import numpy as np
from PIL import Image, ImageDraw

from .datasets import AnnotationTrack, BackgroundVideo, emit_composed_dataset
from .errors import ValidationError
from .rng import derive_rng

logger = logging.getLogger(__name__)

DEFAULT_CROP_SIZE = (96, 96)  # (width, height)
SPRITE_VERTICES = 24
SCORES_DECIMALS = 6

# Filler outside the mask; never equals any sentinel or gradient color.
CROP_FILLER = (1, 1, 1)


def sentinel_color(index: int) -> tuple[int, int, int]:
    """Distinct RGB for track `index`; r % 5 == 0, g % 5 == 2, so r != g."""
    if index < 0 or index >= 48 ** 3:
        raise ValidationError(f"sentinel index out of range: {index}")
    r = 10 + 5 * (index % 48)
    g = 12 + 5 * ((index // 48) % 48)
    b = 10 + 5 * ((index // 2304) % 48)
    return r, g, b


def _sprite_mask(center: tuple[float, float], base_radius: float,
                 jitter: np.ndarray, phase: float,
                 size: tuple[int, int]) -> np.ndarray:
    """Rasterize one morphing polygon; `size` is (width, height)."""
    n = len(jitter)
    angles = 2.0 * math.pi * np.arange(n) / n + phase
    radii = base_radius * (1.0 + jitter * np.sin(angles * 3.0 + phase))
    points = [
        (center[0] + r * math.cos(a), center[1] + r * math.sin(a))
        for r, a in zip(radii, angles)
    ]
    img = Image.new("L", size, 0)
    ImageDraw.Draw(img).polygon(points, fill=255)
    return np.asarray(img) > 0


def generate_test_bank(out_dir, *, master_seed: int, n_categories: int = 4,
                       sequences_per_category: int = 5,
                       frames_per_sequence: int = 16,
                       crop_size: tuple[int, int] = DEFAULT_CROP_SIZE,
                       write_scores: bool = True,
                       planted_scores: dict | None = None) -> dict:
    """Write a sprite instance bank to `out_dir` and return its ground truth.

    Layout per sequence: crops/NNN.png, masks/NNN.png, scores.txt. Returns
    {"sequences": [{category_id, sequence_id, color, areas, scores}, ...]}.
    `planted_scores` maps (category_id, sequence_id) to a constant score for
    every frame of that sequence, overriding the generated ones, so filter
    tests can force known drops.
    """
    out_root = Path(out_dir)
    width, height = crop_size
    cx, cy = width / 2.0, height / 2.0
    max_radius = min(width, height) / 2.0 - 8.0

    records = []
    for cat_index in range(n_categories):
        category_id = cat_index + 1
        for seq_index in range(sequences_per_category):
            rng = derive_rng(master_seed, "test-bank", category_id, seq_index)
            sequence_id = f"seq{seq_index:03d}"
            track_index = cat_index * sequences_per_category + seq_index
            color = sentinel_color(track_index)

            base_radius = float(rng.uniform(0.4, 0.85)) * max_radius
            jitter = rng.uniform(0.0, 0.2, size=SPRITE_VERTICES)
            phase0 = float(rng.uniform(0.0, 2.0 * math.pi))
            spin = float(rng.uniform(-0.25, 0.25))
            scores = np.round(rng.uniform(0.3, 1.0, size=frames_per_sequence),
                              SCORES_DECIMALS)
            if planted_scores and (category_id, sequence_id) in planted_scores:
                scores = np.full(frames_per_sequence,
                                 float(planted_scores[(category_id, sequence_id)]))

            seq_dir = out_root / str(category_id) / sequence_id
            crops_dir = seq_dir / "crops"
            masks_dir = seq_dir / "masks"
            crops_dir.mkdir(parents=True, exist_ok=True)
            masks_dir.mkdir(parents=True, exist_ok=True)

            areas = []
            for j in range(frames_per_sequence):
                mask = _sprite_mask((cx, cy), base_radius, jitter,
                                    phase0 + spin * j, (width, height))
                crop = np.full((height, width, 3), CROP_FILLER, dtype=np.uint8)
                crop[mask] = color
                areas.append(int(mask.sum()))
                Image.fromarray(crop, mode="RGB").save(crops_dir / f"{j:03d}.png")
                Image.fromarray(mask.astype(np.uint8) * 255, mode="L").save(
                    masks_dir / f"{j:03d}.png")
            if write_scores:
                (seq_dir / "scores.txt").write_text(
                    "".join(f"{s:.{SCORES_DECIMALS}f}\n" for s in scores))

            records.append({
                "category_id": category_id,
                "sequence_id": sequence_id,
                "color": color,
                "areas": areas,
                "scores": scores.tolist() if write_scores else None,
            })
    logger.info("generated test bank: %d sequences at %s", len(records), out_root)
    return {"sequences": records, "crop_size": list(crop_size),
            "frames_per_sequence": frames_per_sequence}


# Sentinel index offset for background originals, so their colors can never
# collide with bank sprite colors in the same composition.
_BACKGROUND_COLOR_BASE = 1000


def generate_background_videos(*, master_seed: int, n_videos: int = 5,
                               frames_per_video: int = 16,
                               frame_size: tuple[int, int] = (128, 128),
                               n_categories: int = 4,
                               ) -> tuple[list[BackgroundVideo], dict]:
    """Build background clips in memory: gray gradients plus 0-2 sprite tracks.

    Original sprites are confined to disjoint quadrants so the annotation
    disjointness invariant holds by construction. The first video always
    carries two tracks so scale statistics have data.
    """
    width, height = frame_size
    qw, qh = width // 2, height // 2
    videos = []
    truth = []
    track_counter = 0
    for v in range(n_videos):
        rng = derive_rng(master_seed, "test-background", v)
        video_id = f"video{v:03d}"
        gx = float(rng.uniform(0.5, 2.0))
        gy = float(rng.uniform(0.5, 2.0))
        drift = float(rng.uniform(1.0, 6.0))
        n_tracks = 2 if v == 0 else int(rng.integers(0, 3))

        track_params = []
        for t in range(n_tracks):
            quadrant = t  # one sprite per quadrant, never overlapping
            qx0, qy0 = (quadrant % 2) * qw, (quadrant // 2) * qh
            half = min(qw, qh) / 2.0
            # margin = 1.25 * radius + 2 must stay within the quadrant half
            radius_hi = min(half - 8.0, (half - 2.0) / 1.25)
            if radius_hi <= 2.0:
                raise ValidationError(
                    f"frame_size {frame_size} too small for sprite "
                    "backgrounds; need at least 64x64")
            radius = float(rng.uniform(min(10.0, 0.6 * radius_hi), radius_hi))
            margin = radius * 1.25 + 2.0
            cx = qx0 + float(rng.uniform(margin, qw - margin))
            cy = qy0 + float(rng.uniform(margin, qh - margin))
            vx = float(rng.uniform(-1.5, 1.5))
            vy = float(rng.uniform(-1.5, 1.5))
            jitter = rng.uniform(0.0, 0.2, size=SPRITE_VERTICES)
            phase0 = float(rng.uniform(0.0, 2.0 * math.pi))
            spin = float(rng.uniform(-0.2, 0.2))
            category_id = 1 + (track_counter % n_categories)
            color = sentinel_color(_BACKGROUND_COLOR_BASE + track_counter)
            track_params.append((qx0, qy0, radius, margin, cx, cy, vx, vy,
                                 jitter, phase0, spin, category_id, color))
            track_counter += 1

        frames = []
        segmentations: list[list] = [[] for _ in track_params]
        xs = np.arange(width, dtype=np.float64)
        ys = np.arange(height, dtype=np.float64)
        for j in range(frames_per_video):
            ramp = gx * xs[None, :] + gy * ys[:, None] + drift * j
            gray = (20 + np.mod(ramp, 181.0)).astype(np.uint8)
            frame = np.repeat(gray[:, :, None], 3, axis=2)
            for t, params in enumerate(track_params):
                (qx0, qy0, radius, margin, cx, cy, vx, vy,
                 jitter, phase0, spin, _category_id, color) = params
                # Keep the sprite inside its quadrant as it drifts.
                px = min(max(cx + vx * j, qx0 + margin), qx0 + qw - margin)
                py = min(max(cy + vy * j, qy0 + margin), qy0 + qh - margin)
                mask = _sprite_mask((px, py), radius, jitter,
                                    phase0 + spin * j, frame_size)
                frame[mask] = color
                segmentations[t].append(mask)
            frames.append(frame)

        tracks = [
            AnnotationTrack(track_id=t, category_id=params[11],
                            segmentations=segmentations[t])
            for t, params in enumerate(track_params)
        ]
        videos.append(BackgroundVideo(video_id=video_id, frames=frames,
                                      width=width, height=height, tracks=tracks))
        truth.append({
            "video_id": video_id,
            "n_tracks": n_tracks,
            "colors": [params[12] for params in track_params],
            "category_ids": [params[11] for params in track_params],
        })
    return videos, {"videos": truth, "frame_size": list(frame_size)}


def generate_background_dataset(out_dir, *, master_seed: int, n_videos: int = 5,
                                frames_per_video: int = 16,
                                frame_size: tuple[int, int] = (128, 128),
                                n_categories: int = 4) -> dict:
    """Write a background dataset (frames + manifest) and return ground truth."""
    videos, truth = generate_background_videos(
        master_seed=master_seed, n_videos=n_videos,
        frames_per_video=frames_per_video, frame_size=frame_size,
        n_categories=n_categories,
    )
    manifest_path = emit_composed_dataset(videos, out_dir)
    truth["manifest"] = str(manifest_path)
    logger.info("generated background dataset: %d videos at %s", len(videos), out_dir)
    return truth
