"""Input validation helpers.

These are duck-typed on purpose: anything with the right fields passes, so the
checks work for loaded datasets, freshly composed videos, and hand-built test
fixtures alike. All failures raise ValidationError with a message naming the
offending video/track/frame.
"""

from __future__ import annotations

import numpy as np

from .errors import ValidationError

PROVENANCE_VALUES = ("original", "pasted")


def check_video_id(video_id: str) -> str:
    if not isinstance(video_id, str) or not video_id:
        raise ValidationError(f"video_id must be a non-empty string, got {video_id!r}")
    if "/" in video_id or "\\" in video_id or video_id in (".", ".."):
        raise ValidationError(f"video_id {video_id!r} is not usable as a directory name")
    return video_id


def check_rgb_frame(frame: np.ndarray, *, where: str = "frame") -> np.ndarray:
    if not isinstance(frame, np.ndarray) or frame.ndim != 3 or frame.shape[2] != 3:
        raise ValidationError(f"{where}: expected an H×W×3 array")
    if frame.dtype != np.uint8:
        raise ValidationError(f"{where}: expected uint8 pixels, got {frame.dtype}")
    return frame


def check_binary_mask(mask: np.ndarray, height: int, width: int, *, where: str = "mask") -> np.ndarray:
    if not isinstance(mask, np.ndarray) or mask.ndim != 2:
        raise ValidationError(f"{where}: expected a 2-D array")
    if mask.shape != (height, width):
        raise ValidationError(
            f"{where}: mask shape {mask.shape} does not match frame size ({height}, {width})"
        )
    if mask.dtype != np.bool_:
        raise ValidationError(f"{where}: expected a boolean mask, got dtype {mask.dtype}")
    return mask


def check_track(track, n_frames: int, height: int, width: int, *, where: str) -> None:
    if track.provenance not in PROVENANCE_VALUES:
        raise ValidationError(f"{where}: unknown provenance {track.provenance!r}")
    if len(track.segmentations) != n_frames:
        raise ValidationError(
            f"{where}: {len(track.segmentations)} segmentation entries for {n_frames} frames"
        )
    any_visible = False
    for j, mask in enumerate(track.segmentations):
        if mask is None:
            continue
        check_binary_mask(mask, height, width, where=f"{where} frame {j}")
        if mask.any():
            any_visible = True
    if not any_visible:
        raise ValidationError(f"{where}: track is invisible in every frame")


def _check_video_common(video, *, where: str) -> tuple[int, int, int]:
    check_video_id(video.video_id)
    if len(video.frames) < 1:
        raise ValidationError(f"{where}: video has no frames")
    first = check_rgb_frame(video.frames[0], where=f"{where} frame 0")
    height, width = first.shape[:2]
    for j, frame in enumerate(video.frames):
        check_rgb_frame(frame, where=f"{where} frame {j}")
        if frame.shape != first.shape:
            raise ValidationError(
                f"{where} frame {j}: shape {frame.shape[:2]} differs from frame 0 {first.shape[:2]}"
            )
    seen_ids = set()
    for track in video.tracks:
        if track.track_id in seen_ids:
            raise ValidationError(f"{where}: duplicate track_id {track.track_id}")
        seen_ids.add(track.track_id)
        check_track(track, len(video.frames), height, width, where=f"{where} track {track.track_id}")
    return len(video.frames), height, width


def check_background_video(video) -> None:
    where = f"video {video.video_id!r}"
    _, height, width = _check_video_common(video, where=where)
    if (video.height, video.width) != (height, width):
        raise ValidationError(
            f"{where}: declared size ({video.height}, {video.width}) "
            f"does not match frames ({height}, {width})"
        )


def check_composed_video(video) -> None:
    """Composed videos additionally require per-frame disjoint track masks."""
    where = f"video {video.video_id!r}"
    n_frames, height, width = _check_video_common(video, where=where)
    for j in range(n_frames):
        owners = np.zeros((height, width), dtype=np.uint16)
        for track in video.tracks:
            mask = track.segmentations[j]
            if mask is not None:
                owners += mask
        if (owners > 1).any():
            raise ValidationError(f"{where} frame {j}: track masks overlap; ownership must be disjoint")
