"""Human-inspection renders: contact sheets and per-frame debug overlays.

Contours are the mask minus its 4-neighbor erosion (outside counts as
background), so every contour pixel belongs to the mask and touches its
boundary. Track colors are spread around the hue wheel by the golden ratio
so nearby ids stay visually distinct.
"""

from __future__ import annotations

import colorsys
import math
from pathlib import Path

import numpy as np
from PIL import Image, ImageDraw

GUTTER = 4
SHEET_BACKGROUND = (32, 32, 32)
_GOLDEN = 0.6180339887498949


def track_color(track_id: int) -> tuple[int, int, int]:
    hue = (track_id * _GOLDEN) % 1.0
    r, g, b = colorsys.hsv_to_rgb(hue, 0.9, 1.0)
    return int(r * 255), int(g * 255), int(b * 255)


def erode4(mask: np.ndarray) -> np.ndarray:
    """Binary erosion with the 4-connected cross; outside the frame is 0."""
    padded = np.pad(mask, 1, constant_values=False)
    return (mask
            & padded[:-2, 1:-1] & padded[2:, 1:-1]
            & padded[1:-1, :-2] & padded[1:-1, 2:])


def contour_mask(mask: np.ndarray) -> np.ndarray:
    return mask & ~erode4(mask)


def overlay_frame(frame: np.ndarray, tracks, frame_index: int,
                  label_tracks: bool = True) -> np.ndarray:
    """Composed frame with per-track contour outlines and id labels."""
    img = Image.fromarray(frame, mode="RGB")
    canvas = np.asarray(img).copy()
    labels = []
    for track in tracks:
        mask = track.segmentations[frame_index]
        if mask is None or not mask.any():
            continue
        color = track_color(track.track_id)
        canvas[contour_mask(mask)] = color
        ys, xs = np.nonzero(mask)
        labels.append((float(xs.mean()), float(ys.mean()),
                       str(track.track_id), color))
    if label_tracks and labels:
        img = Image.fromarray(canvas, mode="RGB")
        draw = ImageDraw.Draw(img)
        for cx, cy, text, color in labels:
            draw.text((cx + 1, cy + 1), text, fill=(0, 0, 0))
            draw.text((cx, cy), text, fill=color)
        canvas = np.asarray(img)
    return canvas


def render_contact_sheet(video, label_tracks: bool = True) -> np.ndarray:
    """Grid of all frames with contours; ceil(sqrt(N)) columns."""
    n = video.n_frames
    cols = math.ceil(math.sqrt(n))
    rows = math.ceil(n / cols)
    height, width = video.frames[0].shape[:2]
    sheet = np.full(
        (rows * height + GUTTER * (rows + 1),
         cols * width + GUTTER * (cols + 1), 3),
        SHEET_BACKGROUND, dtype=np.uint8)
    for j in range(n):
        cell = overlay_frame(video.frames[j], video.tracks, j, label_tracks)
        row, col = divmod(j, cols)
        y0 = GUTTER + row * (height + GUTTER)
        x0 = GUTTER + col * (width + GUTTER)
        sheet[y0:y0 + height, x0:x0 + width] = cell
    return sheet


def save_contact_sheet(video, out_path, label_tracks: bool = True) -> Path:
    out = Path(out_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    sheet = render_contact_sheet(video, label_tracks)
    Image.fromarray(sheet, mode="RGB").save(out, format="PNG")
    return out


def write_debug_overlays(video, out_dir,
                         label_tracks: bool = True) -> list[Path]:
    """One annotated PNG per frame under out_dir/<frame:05d>.png."""
    root = Path(out_dir)
    root.mkdir(parents=True, exist_ok=True)
    paths = []
    for j in range(video.n_frames):
        canvas = overlay_frame(video.frames[j], video.tracks, j, label_tracks)
        path = root / f"{j:05d}.png"
        Image.fromarray(canvas, mode="RGB").save(path, format="PNG")
        paths.append(path)
    return paths
