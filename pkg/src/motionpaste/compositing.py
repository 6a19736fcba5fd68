"""Z-ordered paste composition with per-track occlusion accounting.

Instances are resized to hit a target mask area, anchored by the center of
their resized bounding box at the rounded trajectory position, and painted in
ascending z order (later objects on top, all of them above the background).
Pixels keep exactly one owner: each track's visible mask is its own mask minus
everything pasted above it, and original annotations lose whatever the pasted
objects cover. Tracks left invisible in every frame are removed entirely.

There is no blending, shadowing, or boundary smoothing: pixels outside the
pasted masks stay byte-identical to the background.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np
from PIL import Image

from .bank import InstanceFrame
from .datasets import AnnotationTrack, BackgroundVideo
from .errors import ValidationError
from .trajectory import TrajectoryPlan
from .sampling import CompositionConfig

# Tolerated relative deviation of the resized mask area from its target.
RESIZE_AREA_TOLERANCE = 0.02


@dataclass
class ResizedInstance:
    crop: np.ndarray
    mask: np.ndarray
    floored: bool  # a dimension hit the 1-pixel floor; area contract waived


@dataclass
class Placement:
    """One frame's paste: resized crop/mask and integer top-left origin."""

    crop: np.ndarray
    mask: np.ndarray
    origin: tuple[int, int]  # (x, y); may lie outside the frame
    floored: bool = False


@dataclass
class PlacedInstance:
    track_id: int
    category_id: int
    frames: list[Placement]
    z_rank: int


@dataclass
class PasteSpec:
    """Input for one pasted object: window frames, plan, scale, category."""

    frames: list[InstanceFrame]
    plan: TrajectoryPlan
    scale: Union[float, Sequence[float]]
    category_id: int
    sequence_id: str = ""


@dataclass
class ComposedVideo:
    """Output clip: composed frames plus occlusion-corrected annotations."""

    video_id: str
    frames: list[np.ndarray]
    tracks: list[AnnotationTrack] = field(default_factory=list)

    @property
    def n_frames(self) -> int:
        return len(self.frames)

    @property
    def height(self) -> int:
        return self.frames[0].shape[0]

    @property
    def width(self) -> int:
        return self.frames[0].shape[1]


def _resize_mask_nearest(mask: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Nearest-neighbor resample with pixel-center alignment."""
    in_h, in_w = mask.shape
    ys = np.minimum((np.arange(out_h) + 0.5) * (in_h / out_h), in_h - 1).astype(np.intp)
    xs = np.minimum((np.arange(out_w) + 0.5) * (in_w / out_w), in_w - 1).astype(np.intp)
    return mask[np.ix_(ys, xs)]


def resize_instance(frame: InstanceFrame, scale: float,
                    width: int, height: int) -> ResizedInstance:
    """Resize an instance so its mask area lands on scale^2 * H * W.

    The crop is trimmed to the mask bounding box, then both crop and mask are
    scaled by r = scale * sqrt(H * W / mask_area). Output dimensions are the
    floor/ceil rounding of the scaled box whose actual resampled mask area
    comes closest to the target; masks use nearest-neighbor, crops bilinear.
    """
    if not 0.0 < scale <= 1.0:
        raise ValidationError(f"scale must be in (0, 1], got {scale}")
    mask_area = frame.mask_area
    target_area = scale * scale * height * width

    ys, xs = np.nonzero(frame.mask)
    y0, y1 = int(ys.min()), int(ys.max()) + 1
    x0, x1 = int(xs.min()), int(xs.max()) + 1
    box_mask = frame.mask[y0:y1, x0:x1]
    box_crop = frame.crop[y0:y1, x0:x1]
    box_h, box_w = box_mask.shape

    r = scale * math.sqrt(height * width / mask_area)
    floored = box_h * r < 1.0 or box_w * r < 1.0
    h_candidates = sorted({max(1, math.floor(box_h * r)), max(1, math.ceil(box_h * r))})
    w_candidates = sorted({max(1, math.floor(box_w * r)), max(1, math.ceil(box_w * r))})

    best: tuple[float, np.ndarray] | None = None
    for out_h in h_candidates:
        for out_w in w_candidates:
            resized = _resize_mask_nearest(box_mask, out_h, out_w)
            err = abs(float(resized.sum()) - target_area)
            if best is None or err < best[0]:
                best = (err, resized)
    mask = best[1]

    out_h, out_w = mask.shape
    crop_img = Image.fromarray(box_crop, mode="RGB").resize((out_w, out_h), Image.BILINEAR)
    return ResizedInstance(crop=np.asarray(crop_img, dtype=np.uint8), mask=mask, floored=floored)


def round_half_up(value: float) -> int:
    return int(math.floor(value + 0.5))


def paste_origin(position: tuple[float, float], mask_shape: tuple[int, int]) -> tuple[int, int]:
    """Top-left origin placing the box center at the rounded position."""
    out_h, out_w = mask_shape
    px, py = round_half_up(position[0]), round_half_up(position[1])
    return px - out_w // 2, py - out_h // 2


def compose_frame(background: np.ndarray, placements: Sequence[Placement],
                  original_masks: Sequence[Optional[np.ndarray]],
                  ) -> tuple[np.ndarray, list[np.ndarray], list[Optional[np.ndarray]]]:
    """Paint placements over one frame and account ownership per pixel.

    Returns (composed frame, visible mask per placement, visible mask per
    original track). Off-frame regions are clipped silently.
    """
    h, w = background.shape[:2]
    composed = background.copy()
    full_masks: list[np.ndarray] = []

    for p in placements:
        full = np.zeros((h, w), dtype=bool)
        ox, oy = p.origin
        ph, pw = p.mask.shape
        y0, y1 = max(0, oy), min(h, oy + ph)
        x0, x1 = max(0, ox), min(w, ox + pw)
        if y0 < y1 and x0 < x1:
            sub_mask = p.mask[y0 - oy:y1 - oy, x0 - ox:x1 - ox]
            full[y0:y1, x0:x1] = sub_mask
            region = composed[y0:y1, x0:x1]
            crop_region = p.crop[y0 - oy:y1 - oy, x0 - ox:x1 - ox]
            region[sub_mask] = crop_region[sub_mask]
        full_masks.append(full)

    # Walk z from the top: each mask keeps only what nothing above it claimed.
    covered = np.zeros((h, w), dtype=bool)
    placed_visible: list[np.ndarray] = [None] * len(placements)  # type: ignore[list-item]
    for k in range(len(placements) - 1, -1, -1):
        placed_visible[k] = full_masks[k] & ~covered
        covered |= full_masks[k]

    original_visible = [
        None if mask is None else mask & ~covered
        for mask in original_masks
    ]
    return composed, placed_visible, original_visible


def compose_video(background: BackgroundVideo, tracks: Sequence[PasteSpec],
                  cfg: CompositionConfig) -> tuple[ComposedVideo, dict]:
    """Run the full composition for one video.

    Every paste spec must cover exactly the video's frame count. The returned
    report counts pasted, occlusion-removed, frame-crossing, and floor-resized
    tracks for the run log.
    """
    n_frames = background.n_frames
    height, width = background.height, background.width

    for spec in tracks:
        if len(spec.frames) != n_frames or len(spec.plan.positions) != n_frames:
            raise ValidationError(
                f"paste spec for sequence {spec.sequence_id!r} does not cover "
                f"{n_frames} frames (got {len(spec.frames)} frames, "
                f"{len(spec.plan.positions)} positions)"
            )

    next_track_id = max((t.track_id for t in background.tracks), default=-1) + 1
    placed: list[PlacedInstance] = []
    offframe_tracks = 0
    floored_placements = 0
    for z, spec in enumerate(tracks):
        scales = _per_frame_scales(spec.scale, n_frames, spec.sequence_id)
        frame_placements = []
        crossed = False
        for j in range(n_frames):
            resized = resize_instance(spec.frames[j], scales[j], width, height)
            origin = paste_origin(spec.plan.positions[j], resized.mask.shape)
            ph, pw = resized.mask.shape
            if origin[0] < 0 or origin[1] < 0 or origin[0] + pw > width or origin[1] + ph > height:
                crossed = True
            if resized.floored:
                floored_placements += 1
            frame_placements.append(
                Placement(crop=resized.crop, mask=resized.mask, origin=origin,
                          floored=resized.floored)
            )
        offframe_tracks += crossed
        placed.append(
            PlacedInstance(
                track_id=next_track_id + z,
                category_id=spec.category_id,
                frames=frame_placements,
                z_rank=z,
            )
        )

    composed_frames: list[np.ndarray] = []
    pasted_visible: list[list[Optional[np.ndarray]]] = [[] for _ in placed]
    original_visible: list[list[Optional[np.ndarray]]] = [[] for _ in background.tracks]
    for j in range(n_frames):
        frame, placed_vis, orig_vis = compose_frame(
            background.frames[j],
            [p.frames[j] for p in placed],
            [t.segmentations[j] for t in background.tracks],
        )
        composed_frames.append(frame)
        for k, vis in enumerate(placed_vis):
            pasted_visible[k].append(vis if vis.any() else None)
        for k, vis in enumerate(orig_vis):
            original_visible[k].append(
                vis if vis is not None and vis.any() else None
            )

    out_tracks: list[AnnotationTrack] = []
    removed = 0
    for track, masks in zip(background.tracks, original_visible):
        if any(m is not None for m in masks):
            out_tracks.append(
                AnnotationTrack(
                    track_id=track.track_id,
                    category_id=track.category_id,
                    segmentations=masks,
                    provenance=track.provenance,
                )
            )
        else:
            removed += 1
    kept_pasted = 0
    for instance, masks in zip(placed, pasted_visible):
        if any(m is not None for m in masks):
            kept_pasted += 1
            out_tracks.append(
                AnnotationTrack(
                    track_id=instance.track_id,
                    category_id=instance.category_id,
                    segmentations=masks,
                    provenance="pasted",
                )
            )
        else:
            removed += 1

    video = ComposedVideo(
        video_id=background.video_id,
        frames=composed_frames,
        tracks=out_tracks,
    )
    report = {
        "tracks_pasted": kept_pasted,
        "tracks_sampled": len(tracks),
        "tracks_removed_fully_occluded": removed,
        "tracks_crossing_frame_bounds": offframe_tracks,
        "placements_at_resize_floor": floored_placements,
    }
    return video, report


def _per_frame_scales(scale: Union[float, Sequence[float]], n_frames: int,
                      sequence_id: str) -> list[float]:
    if isinstance(scale, (int, float)):
        return [float(scale)] * n_frames
    scales = [float(s) for s in scale]
    if len(scales) != n_frames:
        raise ValidationError(
            f"paste spec for sequence {sequence_id!r}: {len(scales)} scales "
            f"for {n_frames} frames"
        )
    return scales
