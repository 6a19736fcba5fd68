"""Per-object placement paths across background frames.

Coordinate convention: image coordinates, x rightward, y downward, with the
angle measured in degrees from the +x axis toward +y. A plan fixes one start
point and one direction; per-step displacement is either constant (linear),
resampled each step (linear_random), or replaced entirely by a cubic Bezier
curve sampled at uniform parameters (bezier).

Positions are real-valued and never clamped to the frame; rounding to integer
pixels happens at paste time, and off-frame handling belongs to the
compositor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConfigurationError, ValidationError

MODES = ("linear", "linear_random", "bezier")

# Default maximum per-step displacement, as a fraction of the frame diagonal.
DEFAULT_DELTA_MAX_DIAGONAL_FRACTION = 0.05

Point = tuple[float, float]


@dataclass(frozen=True)
class TrajectoryConfig:
    mode: str
    delta_max: float
    frame_size: tuple[int, int]  # (W, H)

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigurationError(f"unknown trajectory mode {self.mode!r}")
        if self.delta_max < 0:
            raise ConfigurationError(f"delta_max must be >= 0, got {self.delta_max}")
        if self.frame_size[0] < 1 or self.frame_size[1] < 1:
            raise ConfigurationError(f"frame size must be >= 1x1, got {self.frame_size}")


def default_delta_max(width: int, height: int) -> float:
    return DEFAULT_DELTA_MAX_DIAGONAL_FRACTION * math.hypot(width, height)


@dataclass
class TrajectoryPlan:
    """Placement schedule for one pasted object across n frames."""

    mode: str
    start: Point
    theta_deg: float
    deltas: list[float]          # n-1 per-step displacements
    positions: list[Point]       # n real-valued positions; positions[0] == start
    bezier_control: Optional[list[Point]] = None

    def to_json(self) -> dict:
        doc = {
            "mode": self.mode,
            "start": list(self.start),
            "theta_deg": self.theta_deg,
            "deltas": list(self.deltas),
            "positions": [list(p) for p in self.positions],
        }
        if self.bezier_control is not None:
            doc["control_points"] = [list(p) for p in self.bezier_control]
        return doc


def sample_start(rng: np.random.Generator, width: int, height: int) -> Point:
    """Uniform start coordinates: x ~ U[0, W), y ~ U[0, H)."""
    if width < 1 or height < 1:
        raise ValidationError(f"frame must be at least 1x1, got {width}x{height}")
    return float(rng.uniform(0.0, width)), float(rng.uniform(0.0, height))


def sample_angle(rng: np.random.Generator) -> float:
    """Direction in degrees, uniform over [0, 360); fixed for a whole plan."""
    return float(rng.uniform(0.0, 360.0))


def _walk(start: Point, theta_deg: float, deltas: list[float]) -> list[Point]:
    """Accumulate positions with the trigonometric step decomposition.

    Reconstruction from (start, theta, deltas) repeats these exact float
    operations, so stored positions are reproducible bit for bit.
    """
    theta = math.radians(theta_deg)
    cos_t, sin_t = math.cos(theta), math.sin(theta)
    positions = [start]
    x, y = start
    for d in deltas:
        x = x + d * cos_t
        y = y + d * sin_t
        positions.append((x, y))
    return positions


def reconstruct_positions(plan: TrajectoryPlan) -> list[Point]:
    """Re-derive linear-mode positions from the stored parameters."""
    if plan.mode not in ("linear", "linear_random"):
        raise ValidationError(f"recurrence reconstruction is undefined for mode {plan.mode!r}")
    return _walk(plan.start, plan.theta_deg, plan.deltas)


def plan_linear(rng: np.random.Generator, cfg: TrajectoryConfig, n_frames: int) -> TrajectoryPlan:
    """Straight line, one displacement drawn once and reused for every step."""
    _require_frames(n_frames)
    width, height = cfg.frame_size
    start = sample_start(rng, width, height)
    theta = sample_angle(rng)
    step = float(rng.uniform(0.0, cfg.delta_max))
    deltas = [step] * (n_frames - 1)
    return TrajectoryPlan(
        mode="linear",
        start=start,
        theta_deg=theta,
        deltas=deltas,
        positions=_walk(start, theta, deltas),
    )


def plan_linear_random(rng: np.random.Generator, cfg: TrajectoryConfig,
                       n_frames: int) -> TrajectoryPlan:
    """Straight line with an independent displacement drawn for every step."""
    _require_frames(n_frames)
    width, height = cfg.frame_size
    start = sample_start(rng, width, height)
    theta = sample_angle(rng)
    deltas = [float(rng.uniform(0.0, cfg.delta_max)) for _ in range(n_frames - 1)]
    return TrajectoryPlan(
        mode="linear_random",
        start=start,
        theta_deg=theta,
        deltas=deltas,
        positions=_walk(start, theta, deltas),
    )


def plan_bezier(rng: np.random.Generator, cfg: TrajectoryConfig, n_frames: int) -> TrajectoryPlan:
    """Cubic Bezier path of random length, sampled at uniform parameters.

    The chord runs from the start point along the sampled direction with
    length L ~ U[0, (n-1) * delta_max]; the two interior control points are
    drawn uniformly inside the frame rectangle.
    """
    _require_frames(n_frames)
    width, height = cfg.frame_size
    start = sample_start(rng, width, height)
    theta = sample_angle(rng)
    length = float(rng.uniform(0.0, (n_frames - 1) * cfg.delta_max))
    theta_rad = math.radians(theta)
    end = (start[0] + length * math.cos(theta_rad), start[1] + length * math.sin(theta_rad))
    p1 = sample_start(rng, width, height)
    p2 = sample_start(rng, width, height)
    control = [start, p1, p2, end]

    if n_frames == 1:
        ts = [0.0]
    else:
        ts = [j / (n_frames - 1) for j in range(n_frames)]
    positions = [decasteljau(control, t) for t in ts]
    deltas = [
        math.hypot(b[0] - a[0], b[1] - a[1])
        for a, b in zip(positions[:-1], positions[1:])
    ]
    return TrajectoryPlan(
        mode="bezier",
        start=start,
        theta_deg=theta,
        deltas=deltas,
        positions=positions,
        bezier_control=control,
    )


def plan_trajectory(rng: np.random.Generator, cfg: TrajectoryConfig,
                    n_frames: int) -> TrajectoryPlan:
    planner = {
        "linear": plan_linear,
        "linear_random": plan_linear_random,
        "bezier": plan_bezier,
    }[cfg.mode]
    return planner(rng, cfg, n_frames)


def decasteljau(points: list[Point], t: float) -> Point:
    """Evaluate a Bezier curve of any degree by repeated linear interpolation.

    At t=0 and t=1 the result is the exact first/last control point, which
    keeps endpoint interpolation bit-exact.
    """
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    s = 1.0 - t
    n = len(points)
    for level in range(1, n):
        for i in range(n - level):
            xs[i] = s * xs[i] + t * xs[i + 1]
            ys[i] = s * ys[i] + t * ys[i + 1]
    return xs[0], ys[0]


def _require_frames(n_frames: int) -> None:
    if n_frames < 1:
        raise ValidationError(f"a plan needs at least one frame, got {n_frames}")
