"""Command-line front end.

Subcommands map one-to-one onto pipeline stages so each is independently
scriptable: gen-prompts, gen-test-bank, stats, compose, preview, validate.
Exit codes: 0 success, 2 validation/configuration error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .errors import DatasetLoadError, MotionPasteError
from .jsonio import canonical_json, read_json
from .pipeline import (
    PipelineConfig,
    render_preview,
    run_pipeline,
    run_stats,
    run_validate,
)
from .prompts import (
    DEFAULT_FRAMES_PER_SEQUENCE,
    generate_prompt_manifest,
    write_prompt_manifest,
)
from .sprites import generate_background_dataset, generate_test_bank

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_IO = 3

# CLI flag name -> PipelineConfig field; applied only when explicitly given.
_CONFIG_FLAGS = {
    "seed": "master_seed",
    "bank": "bank",
    "background": "background",
    "out": "out",
    "trajectory": "trajectory",
    "delta_max": "delta_max",
    "n_max": "n_max",
    "score_threshold": "score_threshold",
    "area_min": "area_min",
    "area_max": "area_max",
    "fraction": "fraction",
    "workers": "workers",
    "stats_in": "stats_in",
    "stats_out": "stats_out",
    "dump_trajectories": "dump_trajectories",
    "debug_overlays": "debug_overlays",
}


def _add_config_flags(parser: argparse.ArgumentParser, *, with_compose_flags: bool) -> None:
    parser.add_argument("--config", default=None,
                        help="JSON config file; explicit flags override it")
    parser.add_argument("--seed", type=int, default=None,
                        help="64-bit master seed")
    parser.add_argument("--background", default=None,
                        help="background dataset root (manifest.json + frames/)")
    parser.add_argument("--stats-out", dest="stats_out", default=None,
                        help="write learned scale statistics to this JSON file")
    if with_compose_flags:
        parser.add_argument("--bank", default=None, help="instance bank root")
        parser.add_argument("--out", default=None, help="output dataset root")
        parser.add_argument("--trajectory", default=None,
                            choices=["linear", "linear-random", "linear_random", "bezier"],
                            help="trajectory mode")
        parser.add_argument("--delta-max", dest="delta_max", type=float, default=None,
                            help="per-step displacement bound in pixels "
                                 "(default: 5%% of the frame diagonal)")
        parser.add_argument("--n-max", dest="n_max", type=int, default=None,
                            help="upper bound of the per-video object count")
        parser.add_argument("--score-threshold", dest="score_threshold", type=float,
                            default=None, help="minimum relevance score kept")
        parser.add_argument("--area-min", dest="area_min", type=float, default=None,
                            help="minimum mask-area fraction kept")
        parser.add_argument("--area-max", dest="area_max", type=float, default=None,
                            help="maximum mask-area fraction kept")
        parser.add_argument("--fraction", type=float, default=None,
                            help="probability that a video is augmented")
        parser.add_argument("--workers", type=int, default=None,
                            help="parallel video workers")
        parser.add_argument("--stats-in", dest="stats_in", default=None,
                            help="read scale statistics from this JSON file")
        parser.add_argument("--dump-trajectories", dest="dump_trajectories",
                            action="store_true", default=None,
                            help="write per-video trajectory plans into the output")
        parser.add_argument("--debug-overlays", dest="debug_overlays",
                            action="store_true", default=None,
                            help="write contour-annotated frames into the output")


def _resolve_config(args: argparse.Namespace) -> PipelineConfig:
    if getattr(args, "config", None):
        config = PipelineConfig.from_json(read_json(args.config))
    else:
        config = PipelineConfig()
    for flag, field_name in _CONFIG_FLAGS.items():
        value = getattr(args, flag, None)
        if value is not None:
            setattr(config, field_name, value)
    return config


def _parse_categories(raw: str) -> list[str]:
    return [part.strip() for part in raw.split(",") if part.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="motionpaste",
        description="Deterministic copy-paste video augmentation engine.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-prompts",
                       help="emit the per-category prompt manifest JSON")
    p.add_argument("--categories", required=True,
                   help="comma-separated category names")
    p.add_argument("--sequences", type=int, default=470,
                   help="sequences requested per category")
    p.add_argument("--frames", type=int, default=DEFAULT_FRAMES_PER_SEQUENCE,
                   help="frames per sequence")
    p.add_argument("--out", required=True, help="manifest output path")

    p = sub.add_parser("gen-test-bank",
                       help="synthesize a deterministic sprite bank "
                            "(and optional background fixture)")
    p.add_argument("--out", required=True, help="bank output directory")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--categories", type=int, default=4)
    p.add_argument("--sequences", type=int, default=5)
    p.add_argument("--frames", type=int, default=16)
    p.add_argument("--crop-size", dest="crop_size", default="96,96",
                   help="crop width,height")
    p.add_argument("--no-scores", dest="write_scores", action="store_false",
                   help="skip scores.txt sidecars (for external scoring)")
    p.add_argument("--background-out", dest="background_out", default=None,
                   help="also write a background dataset fixture here")
    p.add_argument("--videos", type=int, default=5,
                   help="background fixture video count")
    p.add_argument("--frame-size", dest="frame_size", default="128,128",
                   help="background frame width,height")

    p = sub.add_parser("stats", help="compute and cache scale statistics")
    _add_config_flags(p, with_compose_flags=False)

    p = sub.add_parser("compose", help="run the full composition pipeline")
    _add_config_flags(p, with_compose_flags=True)

    p = sub.add_parser("preview", help="render a contact sheet for one video")
    p.add_argument("--dataset", required=True, help="dataset root to read")
    p.add_argument("--video-id", dest="video_id", required=True)
    p.add_argument("--out", required=True, help="output PNG path")

    p = sub.add_parser("validate", help="strictly load datasets and report")
    p.add_argument("--background", default=None)
    p.add_argument("--bank", default=None)

    return parser


def _parse_pair(raw: str, flag: str) -> tuple[int, int]:
    parts = raw.split(",")
    if len(parts) != 2:
        raise MotionPasteError(f"{flag} expects WIDTH,HEIGHT, got {raw!r}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise MotionPasteError(f"{flag} expects integers, got {raw!r}") from exc


def _cmd_gen_prompts(args) -> int:
    categories = _parse_categories(args.categories)
    manifest = generate_prompt_manifest(categories, args.sequences, args.frames)
    write_prompt_manifest(manifest, args.out)
    print(f"wrote {len(manifest.entries)} prompts "
          f"({manifest.total_sequences} sequences, {manifest.total_frames} frames) "
          f"to {args.out}")
    return EXIT_OK


def _cmd_gen_test_bank(args) -> int:
    crop_w, crop_h = _parse_pair(args.crop_size, "--crop-size")
    truth = generate_test_bank(
        args.out, master_seed=args.seed, n_categories=args.categories,
        sequences_per_category=args.sequences, frames_per_sequence=args.frames,
        crop_size=(crop_w, crop_h), write_scores=args.write_scores,
    )
    print(f"wrote bank with {len(truth['sequences'])} sequences to {args.out}")
    if args.background_out:
        frame_w, frame_h = _parse_pair(args.frame_size, "--frame-size")
        bg_truth = generate_background_dataset(
            args.background_out, master_seed=args.seed, n_videos=args.videos,
            frames_per_video=args.frames, frame_size=(frame_w, frame_h),
            n_categories=args.categories,
        )
        print(f"wrote {len(bg_truth['videos'])} background videos "
              f"to {args.background_out}")
    return EXIT_OK


def _cmd_stats(args) -> int:
    config = _resolve_config(args)
    echo = run_stats(config)
    print(canonical_json(echo))
    return EXIT_OK


def _cmd_compose(args) -> int:
    config = _resolve_config(args)
    report = run_pipeline(config)
    totals = report["totals"]
    print(f"composed {totals['videos']} videos "
          f"({totals['videos_augmented']} augmented, "
          f"{totals['tracks_pasted']} tracks pasted, "
          f"{totals['tracks_removed_fully_occluded']} removed by occlusion) "
          f"into {config.out}")
    return EXIT_OK


def _cmd_preview(args) -> int:
    path = render_preview(args.dataset, args.video_id, args.out)
    print(f"wrote contact sheet to {path}")
    return EXIT_OK


def _cmd_validate(args) -> int:
    summary = run_validate(background=args.background, bank=args.bank)
    print(canonical_json(summary))
    return EXIT_OK


_COMMANDS = {
    "gen-prompts": _cmd_gen_prompts,
    "gen-test-bank": _cmd_gen_test_bank,
    "stats": _cmd_stats,
    "compose": _cmd_compose,
    "preview": _cmd_preview,
    "validate": _cmd_validate,
}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except DatasetLoadError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except MotionPasteError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except json.JSONDecodeError as exc:
        print(f"error: malformed JSON: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
