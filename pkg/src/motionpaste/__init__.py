"""Deterministic copy-paste video augmentation for instance segmentation.

Pastes segmented object sequences from an instance bank into background
videos along sampled trajectories, maintaining per-track visible masks,
with fully reproducible output for a given master seed.
"""

from .augmenter import VideoCopyPaste
from .bank import (
    Bank,
    FilterConfig,
    InstanceFrame,
    InstanceSequence,
    filter_bank,
    filter_frame,
    load_instance_bank,
)
from .compositing import (
    ComposedVideo,
    PasteSpec,
    Placement,
    compose_frame,
    compose_video,
    paste_origin,
    resize_instance,
    round_half_up,
)
from .datasets import (
    AnnotationTrack,
    BackgroundVideo,
    emit_composed_dataset,
    load_background_dataset,
)
from .errors import (
    CapacityError,
    CodecError,
    ConfigurationError,
    DatasetLoadError,
    MotionPasteError,
    SchemaError,
    ValidationError,
)
from .pipeline import (
    PipelineConfig,
    render_preview,
    run_pipeline,
    run_stats,
    run_validate,
)
from .preview import (
    overlay_frame,
    render_contact_sheet,
    save_contact_sheet,
    track_color,
    write_debug_overlays,
)
from .prompts import (
    PROMPT_TEMPLATE,
    PromptEntry,
    PromptManifest,
    build_prompt,
    generate_prompt_manifest,
    write_prompt_manifest,
)
from .rle import RleMask, rle_decode, rle_encode
from .rng import derive_rng
from .sampling import (
    CategoryScaleStats,
    CompositionConfig,
    compute_scale_stats,
    load_scale_stats,
    pooled_scale_stats,
    sample_categories,
    sample_num_objects,
    sample_scale,
    save_scale_stats,
    select_instance_window,
)
from .sprites import (
    generate_background_dataset,
    generate_background_videos,
    generate_test_bank,
    sentinel_color,
)
from .trajectory import (
    TrajectoryConfig,
    TrajectoryPlan,
    decasteljau,
    default_delta_max,
    plan_trajectory,
    reconstruct_positions,
)

__version__ = "0.1.0"

__all__ = [
    "VideoCopyPaste",
    "Bank",
    "FilterConfig",
    "InstanceFrame",
    "InstanceSequence",
    "filter_bank",
    "filter_frame",
    "load_instance_bank",
    "ComposedVideo",
    "PasteSpec",
    "Placement",
    "compose_frame",
    "compose_video",
    "paste_origin",
    "resize_instance",
    "round_half_up",
    "AnnotationTrack",
    "BackgroundVideo",
    "emit_composed_dataset",
    "load_background_dataset",
    "CapacityError",
    "CodecError",
    "ConfigurationError",
    "DatasetLoadError",
    "MotionPasteError",
    "SchemaError",
    "ValidationError",
    "PipelineConfig",
    "render_preview",
    "run_pipeline",
    "run_stats",
    "run_validate",
    "overlay_frame",
    "render_contact_sheet",
    "save_contact_sheet",
    "track_color",
    "write_debug_overlays",
    "PROMPT_TEMPLATE",
    "PromptEntry",
    "PromptManifest",
    "build_prompt",
    "generate_prompt_manifest",
    "write_prompt_manifest",
    "RleMask",
    "rle_decode",
    "rle_encode",
    "derive_rng",
    "CategoryScaleStats",
    "CompositionConfig",
    "compute_scale_stats",
    "load_scale_stats",
    "pooled_scale_stats",
    "sample_categories",
    "sample_num_objects",
    "sample_scale",
    "save_scale_stats",
    "select_instance_window",
    "generate_background_dataset",
    "generate_background_videos",
    "generate_test_bank",
    "sentinel_color",
    "TrajectoryConfig",
    "TrajectoryPlan",
    "decasteljau",
    "default_delta_max",
    "plan_trajectory",
    "reconstruct_positions",
    "__version__",
]
