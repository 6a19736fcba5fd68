import json

import numpy as np
import pytest

from motionpaste import (
    ConfigurationError,
    PipelineConfig,
    ValidationError,
    generate_background_dataset,
    generate_test_bank,
    load_background_dataset,
    load_scale_stats,
    render_preview,
    run_pipeline,
    run_stats,
    run_validate,
)
from motionpaste.jsonio import canonical_json
from motionpaste.pipeline import RUN_REPORT_FILENAME

from conftest import tree_hash


@pytest.fixture(scope="module")
def assets(tmp_path_factory):
    root = tmp_path_factory.mktemp("pipeline-assets")
    bank_dir = root / "bank"
    bg_dir = root / "bg"
    generate_test_bank(bank_dir, master_seed=21, n_categories=2,
                       sequences_per_category=2, frames_per_sequence=6,
                       crop_size=(64, 64))
    generate_background_dataset(bg_dir, master_seed=21, n_videos=2,
                                frames_per_video=4, frame_size=(80, 80),
                                n_categories=2)
    return bank_dir, bg_dir


def base_config(assets, out, **overrides):
    bank_dir, bg_dir = assets
    params = dict(master_seed=5, bank=str(bank_dir), background=str(bg_dir),
                  out=str(out), n_max=4)
    params.update(overrides)
    return PipelineConfig(**params)


# --- config object ------------------------------------------------------


def test_config_validate_rejections(tmp_path):
    bad = [
        dict(master_seed=-1),
        dict(rng_algorithm="mt19937"),
        dict(score_threshold=-0.1),
        dict(area_min=0.5, area_max=0.2),
        dict(trajectory="drunkard"),
        dict(delta_max=0.0),
        dict(n_max=0),
        dict(fraction=2.0),
        dict(workers=0),
        dict(bank=str(tmp_path), background=str(tmp_path)),
    ]
    for overrides in bad:
        with pytest.raises(ValidationError):
            PipelineConfig(**overrides).validate()
    PipelineConfig().validate()
    PipelineConfig(trajectory="linear-random").validate()  # dash alias


def test_config_json_round_trip():
    config = PipelineConfig(master_seed=9, scale_clamp=(0.1, 0.8),
                            categories=[1, 2], dump_trajectories=True)
    doc = config.to_json()
    assert doc["scale_clamp"] == [0.1, 0.8]
    clone = PipelineConfig.from_json(doc)
    assert clone == config


def test_config_from_json_rejects_unknown_keys():
    with pytest.raises(ConfigurationError, match="max_objects"):
        PipelineConfig.from_json({"max_objects": 3})
    with pytest.raises(ConfigurationError):
        PipelineConfig.from_json(["not", "a", "dict"])
    with pytest.raises(ConfigurationError):
        PipelineConfig.from_json({"scale_clamp": [0.1]})


# --- full runs ----------------------------------------------------------


def test_run_pipeline_output_tree(assets, tmp_path):
    out = tmp_path / "composed"
    report = run_pipeline(base_config(assets, out))
    assert (out / "manifest.json").is_file()
    assert (out / RUN_REPORT_FILENAME).is_file()
    assert (out / "frames").is_dir()
    assert not out.with_name(out.name + ".partial").exists()

    assert report["rng"] == {"algorithm": "philox", "master_seed": 5}
    assert report["config"]["out"] == str(out)
    assert report["config"]["workers"] == 1
    assert report["scale_stats"]["source"] == "computed"
    assert report["totals"]["videos"] == 2
    assert report["totals"]["videos_augmented"] == 2
    assert report["totals"]["tracks_pasted"] >= 1
    on_disk = json.loads((out / RUN_REPORT_FILENAME).read_text())
    assert on_disk == json.loads(canonical_json(report))

    videos = load_background_dataset(out)  # composed sets reload strictly
    assert [v.video_id for v in videos] == ["video000", "video001"]
    assert any(t.provenance == "pasted" for v in videos for t in v.tracks)


def test_run_pipeline_refuses_existing_out(assets, tmp_path):
    out = tmp_path / "already"
    out.mkdir()
    with pytest.raises(ValidationError, match="already exists"):
        run_pipeline(base_config(assets, out))


def test_run_pipeline_requires_paths(assets, tmp_path):
    config = base_config(assets, tmp_path / "x", bank=None)
    with pytest.raises(ConfigurationError, match="bank"):
        run_pipeline(config)


def test_run_pipeline_is_atomic_on_failure(assets, tmp_path, monkeypatch):
    out = tmp_path / "broken"

    def boom(*args, **kwargs):
        raise RuntimeError("synthetic overlay failure")

    monkeypatch.setattr("motionpaste.pipeline.write_debug_overlays", boom)
    with pytest.raises(RuntimeError, match="synthetic"):
        run_pipeline(base_config(assets, out, debug_overlays=True))
    assert not out.exists()
    assert not out.with_name(out.name + ".partial").exists()


def test_run_pipeline_clears_stale_partial(assets, tmp_path):
    out = tmp_path / "fresh"
    stale = out.with_name(out.name + ".partial")
    stale.mkdir()
    (stale / "junk.txt").write_text("leftover")
    run_pipeline(base_config(assets, out))
    assert out.is_dir()
    assert not stale.exists()
    assert not (out / "junk.txt").exists()


def test_run_pipeline_byte_identical_repeat(assets, tmp_path):
    import shutil

    out = tmp_path / "det"
    run_pipeline(base_config(assets, out, dump_trajectories=True))
    first = tree_hash(out)
    shutil.rmtree(out)
    run_pipeline(base_config(assets, out, dump_trajectories=True))
    assert tree_hash(out) == first


def test_stats_round_trip_through_file(assets, tmp_path):
    bank_dir, bg_dir = assets
    stats_path = tmp_path / "stats.json"
    out_a = tmp_path / "a"
    report_a = run_pipeline(base_config(assets, out_a,
                                        stats_out=str(stats_path)))
    assert stats_path.is_file()
    loaded = load_scale_stats(stats_path)
    echoed = report_a["scale_stats"]["categories"]
    assert {str(c) for c in loaded} == set(echoed)
    for cid, s in loaded.items():
        # the stats file stores 6-decimal floats
        assert echoed[str(cid)]["mu"] == pytest.approx(s.mu, abs=1e-6)

    out_b = tmp_path / "b"
    report_b = run_pipeline(base_config(assets, out_b,
                                        stats_in=str(stats_path)))
    assert report_b["scale_stats"]["source"] == "file"
    assert (json.loads(canonical_json(report_b["scale_stats"]["categories"]))
            == json.loads(canonical_json(echoed)))


def test_trajectory_dumps_and_category_allowlist(assets, tmp_path):
    out = tmp_path / "dumps"
    run_pipeline(base_config(assets, out, dump_trajectories=True,
                             categories=[1]))
    dump_dir = out / "trajectories"
    files = sorted(dump_dir.glob("*.json"))
    assert [f.stem for f in files] == ["video000", "video001"]
    for path in files:
        doc = json.loads(path.read_text())
        assert doc["objects"]
        for obj in doc["objects"]:
            assert obj["category_id"] == 1  # allow-list respected
            assert len(obj["plan"]["positions"]) == 4


def test_category_allowlist_missing_category(assets, tmp_path):
    config = base_config(assets, tmp_path / "x", categories=[1, 99])
    with pytest.raises(ConfigurationError, match="99"):
        run_pipeline(config)


def test_debug_overlays_written(assets, tmp_path):
    out = tmp_path / "dbg"
    run_pipeline(base_config(assets, out, debug_overlays=True))
    for vid in ("video000", "video001"):
        frames = sorted((out / "debug" / vid).glob("*.png"))
        assert [f.name for f in frames] == [f"{j:05d}.png" for j in range(4)]


# --- auxiliary entry points ---------------------------------------------


def test_run_stats_standalone(assets, tmp_path):
    _, bg_dir = assets
    stats_path = tmp_path / "s.json"
    echo = run_stats(PipelineConfig(background=str(bg_dir),
                                    stats_out=str(stats_path)))
    assert echo["source"] == "computed"
    assert echo["categories"]
    assert stats_path.is_file()
    with pytest.raises(ConfigurationError):
        run_stats(PipelineConfig())


def test_render_preview(assets, tmp_path):
    _, bg_dir = assets
    png = render_preview(bg_dir, "video001", tmp_path / "sheet.png")
    assert png.is_file()
    with pytest.raises(ValidationError, match="video000"):
        render_preview(bg_dir, "nope", tmp_path / "x.png")


def test_run_validate_summaries(assets):
    bank_dir, bg_dir = assets
    summary = run_validate(background=str(bg_dir), bank=str(bank_dir))
    assert summary["background"]["videos"] == 2
    assert summary["background"]["frames"] == 8
    assert summary["bank"]["categories"] == 2
    assert summary["bank"]["sequences"] == 4
    assert summary["bank"]["frames"] == 24
    with pytest.raises(ConfigurationError):
        run_validate()


def test_composed_output_only_recolors_pasted_pixels(assets, tmp_path):
    # background bytes outside all pasted masks survive composition exactly
    _, bg_dir = assets
    out = tmp_path / "bytes"
    run_pipeline(base_config(assets, out))
    originals = {v.video_id: v for v in load_background_dataset(bg_dir)}
    for video in load_background_dataset(out):
        src = originals[video.video_id]
        for j in range(video.n_frames):
            pasted_union = np.zeros((video.height, video.width), dtype=bool)
            for track in video.tracks:
                if track.provenance == "pasted" and track.segmentations[j] is not None:
                    pasted_union |= track.segmentations[j]
            same = video.frames[j] == src.frames[j]
            assert same[~pasted_union].all()
