"""Background-dataset ingestion and composed-dataset emission.

The on-disk form is a directory of lossless PNG frames plus one canonical JSON
manifest, laid out as:

    <root>/frames/<video_id>/<frame_idx:05>.png
    <root>/manifest.json

The manifest holds `videos`, `categories`, and `annotations` sections; each
annotation carries one segmentation entry per frame, either null (invisible in
that frame) or an uncompressed column-major RLE object
`{"size": [H, W], "counts": [...]}`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal, Optional

import numpy as np
from PIL import Image

from .errors import DatasetLoadError, SchemaError
from .jsonio import read_json, write_json
from .rle import RleMask, rle_decode, rle_encode
from .validation import check_composed_video

MANIFEST_NAME = "manifest.json"
FRAMES_DIR = "frames"

Provenance = Literal["original", "pasted"]


@dataclass
class AnnotationTrack:
    """One object identity across a video; one optional mask per frame."""

    track_id: int
    category_id: int
    segmentations: list[Optional[np.ndarray]]
    provenance: Provenance = "original"

    def visible_frames(self) -> list[int]:
        return [
            j
            for j, mask in enumerate(self.segmentations)
            if mask is not None and mask.any()
        ]


@dataclass
class BackgroundVideo:
    """A background clip with its pre-existing instance annotations."""

    video_id: str
    frames: list[np.ndarray]
    width: int
    height: int
    tracks: list[AnnotationTrack] = field(default_factory=list)

    @property
    def n_frames(self) -> int:
        return len(self.frames)


def frame_relpath(video_id: str, frame_idx: int) -> str:
    return f"{FRAMES_DIR}/{video_id}/{frame_idx:05d}.png"


def _load_frame(root: Path, relpath: str, video_id: str, frame_idx: int,
                width: int, height: int) -> np.ndarray:
    path = root / relpath
    if not path.is_file():
        raise DatasetLoadError(f"missing frame file: {path}")
    try:
        with Image.open(path) as img:
            frame = np.asarray(img.convert("RGB"), dtype=np.uint8)
    except OSError as exc:
        raise DatasetLoadError(f"unreadable frame file {path}: {exc}") from exc
    if frame.shape != (height, width, 3):
        raise SchemaError(
            f"video {video_id!r} frame {frame_idx}: decoded size "
            f"{frame.shape[:2]} does not match declared ({height}, {width})"
        )
    return frame


def load_background_dataset(root_path: Path | str,
                            manifest: Path | str | None = None) -> list[BackgroundVideo]:
    """Load every video listed in the manifest, in exactly manifest order."""
    root = Path(root_path)
    manifest_path = Path(manifest) if manifest is not None else root / MANIFEST_NAME
    if not manifest_path.is_file():
        raise DatasetLoadError(f"missing manifest: {manifest_path}")
    try:
        doc = read_json(manifest_path)
    except ValueError as exc:
        raise SchemaError(f"manifest {manifest_path} is not valid JSON: {exc}") from exc

    try:
        video_entries = doc["videos"]
        annotation_entries = doc.get("annotations", [])
    except (TypeError, KeyError) as exc:
        raise SchemaError(f"manifest {manifest_path} lacks a 'videos' section") from exc

    by_video: dict[str, list[dict]] = {}
    for entry in annotation_entries:
        by_video.setdefault(str(entry["video_id"]), []).append(entry)

    videos = []
    for entry in video_entries:
        vid = str(entry["id"])
        width, height = int(entry["width"]), int(entry["height"])
        file_names = entry["file_names"]
        if len(file_names) < 1:
            raise SchemaError(f"video {vid!r} lists no frames")
        frames = [
            _load_frame(root, rel, vid, j, width, height)
            for j, rel in enumerate(file_names)
        ]
        tracks = [
            _decode_track(a, vid, len(frames), height, width)
            for a in by_video.get(vid, [])
        ]
        seen = set()
        for track in tracks:
            if track.track_id in seen:
                raise SchemaError(f"video {vid!r}: duplicate track_id {track.track_id}")
            seen.add(track.track_id)
        videos.append(
            BackgroundVideo(video_id=vid, frames=frames, width=width, height=height, tracks=tracks)
        )
    return videos


def _decode_track(entry: dict, video_id: str, n_frames: int,
                  height: int, width: int) -> AnnotationTrack:
    segs = entry["segmentations"]
    if len(segs) != n_frames:
        raise SchemaError(
            f"video {video_id!r} track {entry.get('track_id')}: "
            f"{len(segs)} segmentation entries for {n_frames} frames"
        )
    provenance = entry.get("provenance", "original")
    if provenance not in ("original", "pasted"):
        raise SchemaError(f"video {video_id!r}: unknown provenance {provenance!r}")
    masks: list[Optional[np.ndarray]] = []
    any_visible = False
    for j, seg in enumerate(segs):
        if seg is None:
            masks.append(None)
            continue
        rle = RleMask.from_json(seg)
        if rle.size != (height, width):
            raise SchemaError(
                f"video {video_id!r} track {entry.get('track_id')} frame {j}: "
                f"mask size {rle.size} does not match video ({height}, {width})"
            )
        mask = rle_decode(rle)
        masks.append(mask)
        any_visible = any_visible or bool(mask.any())
    if not any_visible:
        raise SchemaError(
            f"video {video_id!r} track {entry.get('track_id')}: invisible in every frame"
        )
    return AnnotationTrack(
        track_id=int(entry["track_id"]),
        category_id=int(entry["category_id"]),
        segmentations=masks,
        provenance=provenance,
    )


def emit_composed_dataset(videos, out_path: Path | str,
                          category_names: dict[int, str] | None = None) -> Path:
    """Write frames and manifest for `videos` under `out_path`.

    All videos are validated before the first byte is written; emission is a
    pure function of its input, so identical inputs give identical bytes.
    """
    for video in videos:
        check_composed_video(video)

    out = Path(out_path)
    out.mkdir(parents=True, exist_ok=True)

    manifest: dict = {"videos": [], "annotations": [], "categories": []}
    category_ids: set[int] = set()
    annotation_id = 0

    for video in videos:
        height, width = video.frames[0].shape[:2]
        frame_dir = out / FRAMES_DIR / video.video_id
        frame_dir.mkdir(parents=True, exist_ok=True)
        file_names = []
        for j, frame in enumerate(video.frames):
            rel = frame_relpath(video.video_id, j)
            Image.fromarray(frame, mode="RGB").save(out / rel, format="PNG")
            file_names.append(rel)
        manifest["videos"].append(
            {
                "id": video.video_id,
                "file_names": file_names,
                "width": width,
                "height": height,
                "length": len(video.frames),
            }
        )
        for track in video.tracks:
            annotation_id += 1
            category_ids.add(track.category_id)
            segs = []
            areas = []
            for mask in track.segmentations:
                if mask is None or not mask.any():
                    segs.append(None)
                    areas.append(None)
                else:
                    segs.append(rle_encode(mask).to_json())
                    areas.append(int(mask.sum()))
            manifest["annotations"].append(
                {
                    "id": annotation_id,
                    "video_id": video.video_id,
                    "track_id": track.track_id,
                    "category_id": track.category_id,
                    "provenance": track.provenance,
                    "segmentations": segs,
                    "areas": areas,
                }
            )

    names = category_names or {}
    manifest["categories"] = [
        {"id": cid, "name": names.get(cid, f"category_{cid}")}
        for cid in sorted(category_ids)
    ]

    manifest_path = out / MANIFEST_NAME
    write_json(manifest, manifest_path)
    return manifest_path
