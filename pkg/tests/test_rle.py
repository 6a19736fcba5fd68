import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from motionpaste import CodecError, RleMask, rle_decode, rle_encode


def test_hand_worked_example():
    # Column-major flat order of [[1,0],[0,1]] is [1,0,0,1]:
    # a zero-length 0-run, then 1, 2, 1.
    mask = np.array([[1, 0], [0, 1]], dtype=bool)
    rle = rle_encode(mask)
    assert rle.counts == (0, 1, 2, 1)
    assert rle.size == (2, 2)
    assert np.array_equal(rle_decode(rle), mask)


def test_all_zeros_single_run():
    mask = np.zeros((3, 4), dtype=bool)
    rle = rle_encode(mask)
    assert rle.counts == (12,)
    assert np.array_equal(rle_decode(rle), mask)


def test_all_ones_starts_with_empty_zero_run():
    mask = np.ones((2, 3), dtype=bool)
    rle = rle_encode(mask)
    assert rle.counts == (0, 6)
    assert np.array_equal(rle_decode(rle), mask)


def test_counts_sum_equals_pixel_count():
    rng = np.random.default_rng(0)
    for _ in range(50):
        h, w = rng.integers(1, 40, 2)
        mask = rng.random((h, w)) < 0.5
        assert sum(rle_encode(mask).counts) == h * w


def test_accepts_zero_one_integers():
    mask01 = np.array([[0, 1], [1, 0]], dtype=np.uint8)
    assert np.array_equal(rle_decode(rle_encode(mask01)), mask01.astype(bool))


def test_rejects_non_binary_values():
    with pytest.raises(CodecError):
        rle_encode(np.array([[0, 2]], dtype=np.uint8))


def test_rejects_wrong_dimensionality():
    with pytest.raises(CodecError):
        rle_encode(np.zeros(4, dtype=bool))
    with pytest.raises(CodecError):
        rle_encode(np.zeros((2, 2, 2), dtype=bool))


def test_rejects_empty_mask():
    with pytest.raises(CodecError):
        rle_encode(np.zeros((0, 4), dtype=bool))


def test_decode_rejects_bad_sum():
    with pytest.raises(CodecError):
        rle_decode(RleMask(counts=(3,), size=(2, 2)))


def test_decode_rejects_negative_counts():
    with pytest.raises(CodecError):
        rle_decode(RleMask(counts=(-1, 5), size=(2, 2)))


def test_json_round_trip():
    rle = RleMask(counts=(0, 1, 2, 1), size=(2, 2))
    doc = rle.to_json()
    assert doc == {"size": [2, 2], "counts": [0, 1, 2, 1]}
    assert RleMask.from_json(doc) == rle


def test_from_json_rejects_malformed():
    for bad in ({}, {"size": [2]}, {"size": [2, 2]},
                {"size": [2, 2], "counts": "xyz"},
                {"size": None, "counts": [4]}):
        with pytest.raises(CodecError):
            RleMask.from_json(bad)


@st.composite
def random_masks(draw):
    h = draw(st.integers(1, 24))
    w = draw(st.integers(1, 24))
    bits = draw(st.lists(st.booleans(), min_size=h * w, max_size=h * w))
    return np.array(bits, dtype=bool).reshape(h, w)


@settings(max_examples=200, deadline=None)
@given(random_masks())
def test_round_trip_property(mask):
    rle = rle_encode(mask)
    assert np.array_equal(rle_decode(rle), mask)
    # counts alternate 0-run first and never go negative
    assert all(c >= 0 for c in rle.counts)
    assert sum(rle.counts) == mask.size
    # full JSON round trip preserves everything
    assert np.array_equal(rle_decode(RleMask.from_json(rle.to_json())), mask)
