"""Scikit-learn style estimator wrapping the whole augmentation.

fit() learns per-category object-scale statistics from the background
dataset's own annotations; transform() pastes bank instances into each
background video along sampled trajectories. All randomness flows through
counter-based streams derived from (random_state, video_id, object index),
so output never depends on video order, worker count, or scheduling.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .bank import Bank
from .compositing import ComposedVideo, PasteSpec, compose_video
from .datasets import BackgroundVideo
from .errors import ConfigurationError
from .rng import check_master_seed, derive_rng
from .sampling import (
    CategoryScaleStats,
    CompositionConfig,
    compute_scale_stats,
    pooled_scale_stats,
    sample_categories,
    sample_num_objects,
    sample_scale,
    select_instance_window,
)
from .trajectory import TrajectoryConfig, default_delta_max, plan_trajectory

logger = logging.getLogger(__name__)


class VideoCopyPaste(BaseEstimator, TransformerMixin):
    """Paste segmented instance sequences into background videos.

    Parameters
    ----------
    bank : dict mapping category_id -> list of InstanceSequence
        Source instances (typically already filtered). Required by transform.
    n_max : int
        Per-video object count is drawn uniformly from {1, ..., n_max}.
    trajectory : str
        "linear", "linear_random" ("linear-random" accepted), or "bezier".
    delta_max : float or None
        Per-step displacement bound in pixels; None resolves per video to
        5% of the frame diagonal.
    scale_clamp : (float, float)
        Sampled scales are clamped into this closed interval.
    sequence_window : str
        "prefix" or "random_window" placement of the frame window inside
        longer bank sequences.
    overflow_policy : str
        "error" or "pingpong" when a bank sequence is shorter than the video.
    scale_sampling : str
        "per_track" (one scale per pasted object) or "per_frame".
    fraction : float
        Probability that a given video is augmented at all; skipped videos
        pass through unchanged (decided by a per-video coin flip).
    random_state : int
        64-bit master seed for all stream derivation.
    precomputed_stats : dict or None
        Mapping category_id -> CategoryScaleStats. When given, fit() uses it
        instead of measuring the backgrounds.

    Attributes
    ----------
    scale_stats_ : dict[int, CategoryScaleStats]
    pooled_stats_ : CategoryScaleStats or None
        Fallback for categories absent from scale_stats_.
    composition_reports_ : dict[str, dict]
        Per-video composition reports from the last transform, keyed and
        ordered by video_id.
    """

    def __init__(self, bank: Optional[Bank] = None, *, n_max: int = 20,
                 trajectory: str = "linear_random",
                 delta_max: Optional[float] = None,
                 scale_clamp: tuple[float, float] = (0.05, 0.95),
                 sequence_window: str = "prefix",
                 overflow_policy: str = "error",
                 scale_sampling: str = "per_track",
                 fraction: float = 1.0,
                 random_state: int = 0,
                 precomputed_stats: Optional[dict[int, CategoryScaleStats]] = None,
                 workers: int = 1):
        self.bank = bank
        self.n_max = n_max
        self.trajectory = trajectory
        self.delta_max = delta_max
        self.scale_clamp = scale_clamp
        self.sequence_window = sequence_window
        self.overflow_policy = overflow_policy
        self.scale_sampling = scale_sampling
        self.fraction = fraction
        self.random_state = random_state
        self.precomputed_stats = precomputed_stats
        self.workers = workers

    # -- fitting ---------------------------------------------------------

    def fit(self, X, y=None):
        """Learn per-category scale statistics from background annotations.

        X is a list of BackgroundVideo. With precomputed_stats set, X may be
        an empty list.
        """
        self._check_params()
        if self.precomputed_stats is not None:
            self.scale_stats_ = dict(self.precomputed_stats)
        else:
            self.scale_stats_ = compute_scale_stats(X)
        self.pooled_stats_ = pooled_scale_stats(self.scale_stats_)
        return self

    def _check_params(self):
        check_master_seed(self.random_state)
        if not 0.0 <= self.fraction <= 1.0:
            raise ConfigurationError(f"fraction must be in [0, 1], got {self.fraction}")
        if self.workers < 1:
            raise ConfigurationError(f"workers must be >= 1, got {self.workers}")
        self._composition_config()  # validates n_max / clamp / window / policy

    def _composition_config(self) -> CompositionConfig:
        return CompositionConfig(
            n_max=self.n_max,
            scale_clamp=self.scale_clamp,
            sequence_window=self.sequence_window,
            overflow_policy=self.overflow_policy,
            scale_sampling=self.scale_sampling,
        )

    def _trajectory_mode(self) -> str:
        return str(self.trajectory).replace("-", "_")

    # -- transformation --------------------------------------------------

    def transform(self, X) -> list[ComposedVideo]:
        """Compose every background video; returns one ComposedVideo each.

        Per-video stream draw order: fraction gate, object count, category
        and sequence picks. Per-object stream draw order: window start (only
        under random_window), trajectory plan, scale(s). Changing one video
        can never disturb another video's output.
        """
        if not hasattr(self, "scale_stats_"):
            raise NotFittedError(
                "this VideoCopyPaste instance is not fitted yet; "
                "call fit before transform")
        self._check_params()
        if self.bank is None:
            raise ConfigurationError("transform requires an instance bank")
        sequences_by_id = {
            cat: {seq.sequence_id: seq for seq in seqs}
            for cat, seqs in self.bank.items()
        }

        videos = list(X)
        if self.workers > 1 and len(videos) > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                results = list(pool.map(
                    lambda v: self._compose_one(v, sequences_by_id), videos))
        else:
            results = [self._compose_one(v, sequences_by_id) for v in videos]

        self.composition_reports_ = {
            composed.video_id: report
            for composed, report in sorted(results, key=lambda r: r[0].video_id)
        }
        return [composed for composed, _ in results]

    def _compose_one(self, video: BackgroundVideo,
                     sequences_by_id: dict) -> tuple[ComposedVideo, dict]:
        cfg = self._composition_config()
        seed = self.random_state
        video_stream = derive_rng(seed, "video", video.video_id)

        # The gate is drawn unconditionally so fraction never shifts the
        # remaining draws for videos that do get augmented.
        gate = float(video_stream.uniform())
        if gate >= self.fraction:
            passthrough = ComposedVideo(
                video_id=video.video_id,
                frames=[frame.copy() for frame in video.frames],
                tracks=list(video.tracks),
            )
            return passthrough, {"augmented": False, "objects_requested": 0}

        n_objects = sample_num_objects(video_stream, cfg)
        picks = sample_categories(video_stream, self.bank, n_objects)

        traj_cfg = TrajectoryConfig(
            mode=self._trajectory_mode(),
            delta_max=(self.delta_max if self.delta_max is not None
                       else default_delta_max(video.width, video.height)),
            frame_size=(video.width, video.height),
        )

        specs = []
        object_log = []
        for k, (category_id, sequence_id) in enumerate(picks):
            obj_stream = derive_rng(seed, "video", video.video_id, "object", k)
            sequence = sequences_by_id[category_id][sequence_id]
            window = select_instance_window(sequence, video.n_frames, cfg,
                                            rng=obj_stream)
            plan = plan_trajectory(obj_stream, traj_cfg, video.n_frames)
            stats = self._stats_for(category_id)
            if cfg.scale_sampling == "per_frame":
                scale = [sample_scale(obj_stream, stats, cfg)
                         for _ in range(video.n_frames)]
            else:
                scale = sample_scale(obj_stream, stats, cfg)
            specs.append(PasteSpec(frames=window, plan=plan, scale=scale,
                                   category_id=category_id,
                                   sequence_id=sequence_id))
            object_log.append({
                "object_index": k,
                "category_id": category_id,
                "sequence_id": sequence_id,
                "scale": scale,
                "plan": plan.to_json(),
            })

        composed, report = compose_video(video, specs, cfg)
        report.update({
            "augmented": True,
            "objects_requested": n_objects,
            "delta_max": traj_cfg.delta_max,
            "objects": object_log,
        })
        return composed, report

    def _stats_for(self, category_id: int) -> CategoryScaleStats:
        stats = self.scale_stats_.get(category_id)
        if stats is None:
            stats = self.pooled_stats_
        if stats is None:
            raise ConfigurationError(
                "no scale statistics available for category "
                f"{category_id}; fit on annotated backgrounds or provide "
                "precomputed_stats")
        return stats
