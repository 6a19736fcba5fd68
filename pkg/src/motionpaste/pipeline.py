"""End-to-end run orchestration: load, filter, fit, compose, emit, report.

A run is a pure function of (config, input bytes): identical master seeds and
inputs produce byte-identical output trees. Output is assembled in a sibling
`<out>.partial` directory and moved into place with os.replace only after
every file is written, so a failed run leaves nothing at the output path.
"""

from __future__ import annotations

import logging
import os
import shutil
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional

from .augmenter import VideoCopyPaste
from .bank import FilterConfig, filter_bank, load_instance_bank
from .datasets import emit_composed_dataset, load_background_dataset
from .errors import ConfigurationError, ValidationError
from .jsonio import write_json
from .preview import save_contact_sheet, write_debug_overlays
from .rng import RNG_ALGORITHM, check_master_seed, check_rng_algorithm
from .sampling import (
    CompositionConfig,
    load_scale_stats,
    save_scale_stats,
)
from .trajectory import MODES

logger = logging.getLogger(__name__)

RUN_REPORT_FILENAME = "run_report.json"
TRAJECTORY_DIRNAME = "trajectories"
DEBUG_DIRNAME = "debug"


@dataclass
class PipelineConfig:
    """Fully resolved run configuration; also the config-file schema."""

    master_seed: int = 0
    rng_algorithm: str = RNG_ALGORITHM
    bank: Optional[str] = None
    background: Optional[str] = None
    out: Optional[str] = None
    score_threshold: float = 0.21
    area_min: float = 0.05
    area_max: float = 0.95
    trajectory: str = "linear_random"
    delta_max: Optional[float] = None
    n_max: int = 20
    scale_clamp: tuple[float, float] = (0.05, 0.95)
    sequence_window: str = "prefix"
    overflow_policy: str = "error"
    scale_sampling: str = "per_track"
    categories: Optional[list[int]] = None
    fraction: float = 1.0
    workers: int = 1
    stats_in: Optional[str] = None
    stats_out: Optional[str] = None
    dump_trajectories: bool = False
    debug_overlays: bool = False

    def validate(self) -> "PipelineConfig":
        check_master_seed(self.master_seed)
        check_rng_algorithm(self.rng_algorithm)
        self.filter_config()  # raises on bad thresholds
        mode = self.trajectory.replace("-", "_")
        if mode not in MODES:
            raise ConfigurationError(f"unknown trajectory mode {self.trajectory!r}")
        if self.delta_max is not None and self.delta_max <= 0:
            raise ConfigurationError(f"delta_max must be > 0, got {self.delta_max}")
        self.composition_config()
        if not 0.0 <= self.fraction <= 1.0:
            raise ConfigurationError(f"fraction must be in [0, 1], got {self.fraction}")
        if self.workers < 1:
            raise ConfigurationError(f"workers must be >= 1, got {self.workers}")
        paths = [p for p in (self.bank, self.background, self.out) if p is not None]
        resolved = [Path(p).resolve() for p in paths]
        if len(set(resolved)) != len(resolved):
            raise ConfigurationError("bank, background, and out paths must be distinct")
        return self

    def filter_config(self) -> FilterConfig:
        return FilterConfig(score_threshold=self.score_threshold,
                            area_min_fraction=self.area_min,
                            area_max_fraction=self.area_max)

    def composition_config(self) -> CompositionConfig:
        return CompositionConfig(n_max=self.n_max,
                                 scale_clamp=tuple(self.scale_clamp),
                                 sequence_window=self.sequence_window,
                                 overflow_policy=self.overflow_policy,
                                 scale_sampling=self.scale_sampling)

    def to_json(self) -> dict:
        payload = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, tuple):
                value = list(value)
            payload[f.name] = value
        return payload

    @classmethod
    def from_json(cls, data: dict) -> "PipelineConfig":
        if not isinstance(data, dict):
            raise ConfigurationError("config document must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigurationError(
                f"unknown config keys: {', '.join(sorted(unknown))}")
        kwargs = dict(data)
        if "scale_clamp" in kwargs and kwargs["scale_clamp"] is not None:
            clamp = kwargs["scale_clamp"]
            if not isinstance(clamp, (list, tuple)) or len(clamp) != 2:
                raise ConfigurationError("scale_clamp must be a [min, max] pair")
            kwargs["scale_clamp"] = (float(clamp[0]), float(clamp[1]))
        return cls(**kwargs)


def _load_filtered_bank(config: PipelineConfig):
    bank = load_instance_bank(config.bank)
    if config.categories is not None:
        wanted = set(config.categories)
        missing = wanted - set(bank)
        if missing:
            raise ConfigurationError(
                "categories not present in bank: "
                + ", ".join(str(c) for c in sorted(missing)))
        bank = {cid: seqs for cid, seqs in bank.items() if cid in wanted}
    return filter_bank(bank, config.filter_config())


def run_pipeline(config: PipelineConfig) -> dict:
    """Execute a full composition run; returns the run report."""
    config.validate()
    for name in ("bank", "background", "out"):
        if getattr(config, name) is None:
            raise ConfigurationError(f"compose runs require the {name} path")

    out_path = Path(config.out)
    if out_path.exists():
        raise ValidationError(
            f"output path {out_path} already exists; refusing to overwrite")

    backgrounds = load_background_dataset(config.background)
    filtered_bank, filter_report = _load_filtered_bank(config)

    if config.stats_in is not None:
        stats = load_scale_stats(config.stats_in)
        stats_source = "file"
    else:
        stats = None
        stats_source = "computed"

    estimator = VideoCopyPaste(
        bank=filtered_bank,
        n_max=config.n_max,
        trajectory=config.trajectory,
        delta_max=config.delta_max,
        scale_clamp=tuple(config.scale_clamp),
        sequence_window=config.sequence_window,
        overflow_policy=config.overflow_policy,
        scale_sampling=config.scale_sampling,
        fraction=config.fraction,
        random_state=config.master_seed,
        precomputed_stats=stats,
        workers=config.workers,
    )
    estimator.fit(backgrounds)
    if config.stats_out is not None:
        save_scale_stats(estimator.scale_stats_, config.stats_out)

    composed = estimator.transform(backgrounds)

    reports = {}
    trajectory_dumps = {}
    for video_id, report in estimator.composition_reports_.items():
        report = dict(report)
        objects = report.pop("objects", None)
        if objects is not None:
            trajectory_dumps[video_id] = objects
        reports[video_id] = report

    run_report = {
        "config": config.to_json(),
        "rng": {"algorithm": config.rng_algorithm, "master_seed": config.master_seed},
        "filter": filter_report,
        "scale_stats": _stats_echo(estimator, stats_source),
        "composition": reports,
        "totals": _totals(reports),
    }

    tmp_path = out_path.with_name(out_path.name + ".partial")
    if tmp_path.exists():
        shutil.rmtree(tmp_path)
    try:
        emit_composed_dataset(composed, tmp_path)
        if config.dump_trajectories:
            dump_dir = tmp_path / TRAJECTORY_DIRNAME
            dump_dir.mkdir(parents=True, exist_ok=True)
            for video_id in sorted(trajectory_dumps):
                write_json({"video_id": video_id,
                            "objects": trajectory_dumps[video_id]},
                           dump_dir / f"{video_id}.json")
        if config.debug_overlays:
            for video in composed:
                write_debug_overlays(video, tmp_path / DEBUG_DIRNAME / video.video_id)
        write_json(run_report, tmp_path / RUN_REPORT_FILENAME)
        os.replace(tmp_path, out_path)
    except BaseException:
        shutil.rmtree(tmp_path, ignore_errors=True)
        raise
    logger.info("composed %d videos into %s", len(composed), out_path)
    return run_report


def _stats_echo(estimator: VideoCopyPaste, source: str) -> dict:
    categories = {
        str(cid): {"mu": s.mu, "sigma": s.sigma, "sample_count": s.sample_count}
        for cid, s in estimator.scale_stats_.items()
    }
    pooled = estimator.pooled_stats_
    return {
        "source": source,
        "categories": categories,
        "pooled": None if pooled is None else {
            "mu": pooled.mu, "sigma": pooled.sigma,
            "sample_count": pooled.sample_count,
        },
    }


def _totals(reports: dict) -> dict:
    totals = {
        "videos": len(reports),
        "videos_augmented": 0,
        "tracks_pasted": 0,
        "tracks_removed_fully_occluded": 0,
        "tracks_crossing_frame_bounds": 0,
        "placements_at_resize_floor": 0,
    }
    for report in reports.values():
        if report.get("augmented"):
            totals["videos_augmented"] += 1
        for key in ("tracks_pasted", "tracks_removed_fully_occluded",
                    "tracks_crossing_frame_bounds", "placements_at_resize_floor"):
            totals[key] += report.get(key, 0)
    return totals


def run_stats(config: PipelineConfig) -> dict:
    """Compute scale statistics from the background dataset alone."""
    config.validate()
    if config.background is None:
        raise ConfigurationError("stats runs require the background path")
    backgrounds = load_background_dataset(config.background)
    estimator = VideoCopyPaste(random_state=config.master_seed)
    estimator.fit(backgrounds)
    if config.stats_out is not None:
        save_scale_stats(estimator.scale_stats_, config.stats_out)
    return _stats_echo(estimator, "computed")


def render_preview(dataset_root, video_id: str, out_path) -> Path:
    """Contact-sheet image for one video of a composed (or background) set."""
    videos = load_background_dataset(dataset_root)
    for video in videos:
        if video.video_id == video_id:
            return save_contact_sheet(video, out_path)
    known = ", ".join(v.video_id for v in videos)
    raise ValidationError(f"video_id {video_id!r} not found (have: {known})")


def run_validate(background: Optional[str] = None,
                 bank: Optional[str] = None) -> dict:
    """Load datasets strictly and report what was checked."""
    if background is None and bank is None:
        raise ConfigurationError("nothing to validate: pass a background or bank path")
    summary = {}
    if background is not None:
        videos = load_background_dataset(background)
        summary["background"] = {
            "videos": len(videos),
            "frames": sum(v.n_frames for v in videos),
            "tracks": sum(len(v.tracks) for v in videos),
        }
    if bank is not None:
        loaded = load_instance_bank(bank)
        summary["bank"] = {
            "categories": len(loaded),
            "sequences": sum(len(seqs) for seqs in loaded.values()),
            "frames": sum(seq.length for seqs in loaded.values() for seq in seqs),
        }
    return summary
