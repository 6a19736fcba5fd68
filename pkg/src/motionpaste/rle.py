"""Uncompressed column-major run-length codec for binary masks.

The encoding matches the COCO uncompressed convention: pixels are scanned in
column-major (Fortran) order and `counts` holds alternating run lengths of
0-pixels and 1-pixels, always starting with the 0-run, which may be empty.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CodecError


@dataclass(frozen=True)
class RleMask:
    """Run-length encoded binary mask. `size` is (height, width)."""

    counts: tuple[int, ...]
    size: tuple[int, int]

    def to_json(self) -> dict:
        return {"size": [self.size[0], self.size[1]], "counts": list(self.counts)}

    @classmethod
    def from_json(cls, obj: dict) -> "RleMask":
        try:
            h, w = obj["size"]
            counts = tuple(int(c) for c in obj["counts"])
        except (KeyError, TypeError, ValueError) as exc:
            raise CodecError(f"malformed RLE object: {obj!r}") from exc
        return cls(counts=counts, size=(int(h), int(w)))


def rle_encode(mask: np.ndarray) -> RleMask:
    """Encode a binary H×W mask. Raises CodecError on non-binary input."""
    m = np.asarray(mask)
    if m.ndim != 2:
        raise CodecError(f"mask must be 2-D, got shape {m.shape}")
    if m.dtype != np.bool_:
        values = np.unique(m)
        if not np.isin(values, (0, 1)).all():
            raise CodecError(f"mask contains non-binary values: {values[:8]}")
        m = m.astype(bool)
    h, w = m.shape
    flat = m.ravel(order="F")
    if flat.size == 0:
        raise CodecError("mask must contain at least one pixel")
    boundaries = np.flatnonzero(flat[1:] != flat[:-1]) + 1
    edges = np.concatenate(([0], boundaries, [flat.size]))
    counts = np.diff(edges)
    if flat[0]:
        counts = np.concatenate(([0], counts))
    return RleMask(counts=tuple(int(c) for c in counts), size=(h, w))


def rle_decode(rle: RleMask) -> np.ndarray:
    """Decode back to a boolean H×W mask; inverse of `rle_encode`."""
    h, w = rle.size
    counts = np.asarray(rle.counts, dtype=np.int64)
    if counts.size and counts.min() < 0:
        raise CodecError("RLE counts must be non-negative")
    total = int(counts.sum())
    if total != h * w:
        raise CodecError(f"RLE counts sum to {total}, expected {h}*{w}={h * w}")
    values = np.arange(counts.size, dtype=np.int64) % 2
    flat = np.repeat(values.astype(bool), counts)
    return flat.reshape((h, w), order="F")
