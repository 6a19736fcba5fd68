import numpy as np
import pytest
from PIL import Image

from motionpaste import (
    ValidationError,
    generate_background_videos,
    generate_test_bank,
    load_instance_bank,
    sentinel_color,
)

from conftest import tree_hash


def test_sentinel_color_never_gray_and_unique():
    seen = set()
    for i in range(5000):
        r, g, b = sentinel_color(i)
        assert r % 5 == 0 and g % 5 == 2  # r != g, so never gray
        assert (r, g, b) not in seen
        seen.add((r, g, b))


def test_sentinel_color_range_checked():
    sentinel_color(48 ** 3 - 1)
    with pytest.raises(ValidationError):
        sentinel_color(48 ** 3)
    with pytest.raises(ValidationError):
        sentinel_color(-1)


def test_bank_generation_layout_and_truth(tmp_path):
    truth = generate_test_bank(tmp_path, master_seed=3, n_categories=2,
                               sequences_per_category=2, frames_per_sequence=4)
    assert len(truth["sequences"]) == 4
    for entry in truth["sequences"]:
        seq_dir = tmp_path / str(entry["category_id"]) / entry["sequence_id"]
        scores = [float(line) for line in
                  (seq_dir / "scores.txt").read_text().splitlines()]
        assert scores == entry["scores"]
        for j, expected_area in enumerate(entry["areas"]):
            mask = np.asarray(Image.open(seq_dir / "masks" / f"{j:03d}.png"))
            crop = np.asarray(Image.open(seq_dir / "crops" / f"{j:03d}.png"))
            assert int((mask > 0).sum()) == expected_area
            # sentinel color fills the mask; filler elsewhere
            assert tuple(crop[mask > 0][0]) == tuple(entry["color"])
            assert (crop[mask == 0] == 1).all()


def test_bank_generation_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    truth_a = generate_test_bank(a, master_seed=5, n_categories=2,
                                 sequences_per_category=2,
                                 frames_per_sequence=3)
    truth_b = generate_test_bank(b, master_seed=5, n_categories=2,
                                 sequences_per_category=2,
                                 frames_per_sequence=3)
    assert truth_a == truth_b
    assert tree_hash(a) == tree_hash(b)


def test_bank_generation_planted_scores(tmp_path):
    planted = {(1, "seq000"): 0.10}
    truth = generate_test_bank(tmp_path, master_seed=1, n_categories=1,
                               sequences_per_category=2,
                               frames_per_sequence=3,
                               planted_scores=planted)
    by_id = {(e["category_id"], e["sequence_id"]): e
             for e in truth["sequences"]}
    assert by_id[(1, "seq000")]["scores"] == [0.10, 0.10, 0.10]
    assert all(s >= 0.3 for s in by_id[(1, "seq001")]["scores"])


def test_bank_loads_through_loader(tmp_path):
    generate_test_bank(tmp_path, master_seed=2, n_categories=2,
                       sequences_per_category=1, frames_per_sequence=3)
    bank = load_instance_bank(tmp_path)
    assert sorted(bank) == [1, 2]
    assert all(len(seqs) == 1 for seqs in bank.values())


def test_background_videos_structure():
    videos, truth = generate_background_videos(master_seed=4, n_videos=3,
                                               frames_per_video=5,
                                               frame_size=(96, 96))
    assert len(videos) == 3
    assert len(videos[0].tracks) == 2  # first video always has two objects
    for video, info in zip(videos, truth["videos"]):
        assert video.video_id == info["video_id"]
        assert video.n_frames == 5
        for track in video.tracks:
            assert all(seg is not None and seg.any()
                       for seg in track.segmentations)


def test_background_sprites_disjoint_and_sentinel_colored():
    videos, truth = generate_background_videos(master_seed=7, n_videos=4,
                                               frames_per_video=4,
                                               frame_size=(128, 128))
    colors = set()
    for video, info in zip(videos, truth["videos"]):
        for j in range(video.n_frames):
            stack = np.zeros((128, 128), dtype=np.uint8)
            for track in video.tracks:
                stack += track.segmentations[j]
            assert stack.max() <= 1  # quadrant confinement keeps them apart
        assert info["n_tracks"] == len(video.tracks)
        for track, color in zip(video.tracks, info["colors"]):
            color = tuple(color)
            assert color not in colors
            colors.add(color)
            r, g, b = color
            assert not (r == g == b)
            seg0 = track.segmentations[0]
            assert tuple(video.frames[0][seg0][0]) == color


def test_background_without_sprites_is_pure_gray():
    videos, _ = generate_background_videos(master_seed=4, n_videos=2,
                                           frames_per_video=3,
                                           frame_size=(64, 64))
    video = videos[0]
    union = np.zeros((64, 64), dtype=bool)
    for track in video.tracks:
        union |= track.segmentations[0]
    frame = video.frames[0]
    outside = frame[~union]
    assert (outside[:, 0] == outside[:, 1]).all()
    assert (outside[:, 1] == outside[:, 2]).all()


def test_background_generation_deterministic():
    a, _ = generate_background_videos(master_seed=9, n_videos=2,
                                      frames_per_video=3)
    b, _ = generate_background_videos(master_seed=9, n_videos=2,
                                      frames_per_video=3)
    for va, vb in zip(a, b):
        assert all(np.array_equal(fa, fb) for fa, fb in zip(va.frames, vb.frames))
