"""Cross-package checks: sidecars written by the scorer load cleanly here.

The fixtures under testdata/ are shared with the sidecar scorer's own test
suite. golden-bank is the raw input; golden-bank-scored is the same bank
after a scorer run, committed so these tests need no Node toolchain.
"""

from __future__ import annotations

import json
import re
from pathlib import Path

import pytest

from motionpaste import FilterConfig, filter_bank, load_instance_bank

REPO_ROOT = Path(__file__).resolve().parent.parent
GOLDEN_BANK = REPO_ROOT / "testdata" / "golden-bank"
GOLDEN_SCORED = REPO_ROOT / "testdata" / "golden-bank-scored"

SCORE_LINE = re.compile(r"^(0|1)\.\d{6}$")


@pytest.fixture(scope="module")
def scored_bank():
    return load_instance_bank(GOLDEN_SCORED)


def test_scored_bank_loads_with_no_schema_errors(scored_bank):
    assert sorted(scored_bank) == [1, 2]
    assert all(len(seqs) == 2 for seqs in scored_bank.values())


def test_every_frame_carries_a_score_in_range(scored_bank):
    for seqs in scored_bank.values():
        for seq in seqs:
            for frame in seq.frames:
                assert frame.relevance_score is not None
                assert 0.0 <= frame.relevance_score <= 1.0


def test_sidecar_lines_are_six_decimal_floats():
    sidecars = sorted(GOLDEN_SCORED.glob("*/*/scores.txt"))
    assert len(sidecars) == 4
    for path in sidecars:
        lines = path.read_text(encoding="utf-8").splitlines()
        crops = list((path.parent / "crops").glob("*.png"))
        assert len(lines) == len(crops) == 4
        for line in lines:
            assert SCORE_LINE.match(line), f"{path}: {line!r}"


def test_unscored_twin_still_loads_without_sidecars():
    bank = load_instance_bank(GOLDEN_BANK)
    for seqs in bank.values():
        for seq in seqs:
            assert all(f.relevance_score is None for f in seq.frames)


def test_filter_uses_scorer_output(scored_bank):
    # one category was built below the keep threshold, one above
    kept, report = filter_bank(scored_bank, FilterConfig())
    assert len(kept[1]) == 0
    assert len(kept[2]) == 2
    cat1 = report["categories"]["1"]
    assert cat1["sequences_dropped"] == 2
    assert cat1["frame_drops"]["low_score"] == 8


def test_summary_totals_match_bank_shape(scored_bank):
    doc = json.loads((GOLDEN_SCORED / "score_summary.json").read_text())
    n_frames = sum(
        len(seq.frames) for seqs in scored_bank.values() for seq in seqs
    )
    assert doc["totals"] == {
        "categories": len(scored_bank),
        "sequences": sum(len(s) for s in scored_bank.values()),
        "frames": n_frames,
    }
    for cat in doc["categories"].values():
        assert sum(cat["histogram"]) == cat["frames"]
        assert 0.0 <= cat["min"] <= cat["mean"] <= cat["max"] <= 1.0
