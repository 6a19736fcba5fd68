"""Shared fixtures and helpers for the test suite."""

from __future__ import annotations

import hashlib
from pathlib import Path

import numpy as np
import pytest

from motionpaste import (
    AnnotationTrack,
    BackgroundVideo,
    InstanceFrame,
    InstanceSequence,
)


def make_instance_frame(mask_area: int, size: tuple[int, int] = (20, 20),
                        score: float | None = None,
                        color: tuple[int, int, int] = (200, 40, 40)) -> InstanceFrame:
    """Frame whose mask has exactly `mask_area` pixels (row-major fill)."""
    h, w = size
    assert 1 <= mask_area <= h * w
    flat = np.zeros(h * w, dtype=bool)
    flat[:mask_area] = True
    mask = flat.reshape(h, w)
    crop = np.full((h, w, 3), 1, dtype=np.uint8)
    crop[mask] = color
    return InstanceFrame(crop=crop, mask=mask, relevance_score=score)


def make_sequence(sequence_id: str, category_id: int, n_frames: int,
                  mask_area: int = 60, size: tuple[int, int] = (20, 20),
                  score: float | None = 0.9) -> InstanceSequence:
    frames = [make_instance_frame(mask_area, size, score) for _ in range(n_frames)]
    return InstanceSequence(sequence_id=sequence_id, category_id=category_id,
                            frames=frames)


def make_background(video_id: str = "v0", n_frames: int = 4,
                    size: tuple[int, int] = (64, 64),
                    tracks: list[AnnotationTrack] | None = None,
                    gray: int = 100) -> BackgroundVideo:
    h, w = size
    frames = [np.full((h, w, 3), gray, dtype=np.uint8) for _ in range(n_frames)]
    return BackgroundVideo(video_id=video_id, frames=frames, width=w, height=h,
                           tracks=tracks or [])


def square_mask(size: tuple[int, int], y0: int, x0: int, side: int) -> np.ndarray:
    mask = np.zeros(size, dtype=bool)
    mask[y0:y0 + side, x0:x0 + side] = True
    return mask


def tree_hash(root: Path) -> str:
    """SHA-256 over relative paths and bytes of every file under root."""
    digest = hashlib.sha256()
    for path in sorted(root.rglob("*")):
        if path.is_file():
            digest.update(str(path.relative_to(root)).encode("utf-8"))
            digest.update(b"\x00")
            digest.update(path.read_bytes())
    return digest.hexdigest()


@pytest.fixture(scope="session")
def fixture_bank(tmp_path_factory):
    """Session-wide sprite bank: 4 categories x 5 sequences x 16 frames."""
    from motionpaste import generate_test_bank

    root = tmp_path_factory.mktemp("bank")
    truth = generate_test_bank(root, master_seed=11)
    return root, truth


@pytest.fixture(scope="session")
def fixture_background(tmp_path_factory):
    """Session-wide background dataset: 5 videos x 16 frames at 128x128."""
    from motionpaste import generate_background_dataset

    root = tmp_path_factory.mktemp("background")
    truth = generate_background_dataset(root, master_seed=11)
    return root, truth
