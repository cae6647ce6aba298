"""The vectorised engine must agree word for word with the scalar codecs."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from polypack import _engine
from polypack.blocks import BlockPlan, CodecPolicy, compress_batch, decompress_batch
from polypack.errors import CorruptStream
from polypack.ring import BaseParams, pack_basic
from polypack.split import pack_advanced, split_schedule


@given(st.integers(2, 2**32 - 1), st.integers(1, 2000))
def test_advanced_layout_matches_schedule(B, n):
    digits, R, q = _engine.advanced_layout(B, n)
    sched = split_schedule(B, n)
    assert digits.tolist() == [s.p for s in sched.steps]
    assert R.tolist() == [s.R for s in sched.steps]
    assert q.tolist() == list(sched.consumed)


@st.composite
def multi_block(draw):
    n_blocks = draw(st.integers(1, 6))
    size = draw(st.integers(1, 120))
    blocks = []
    for i in range(n_blocks):
        B = draw(st.one_of(st.integers(1, 50), st.integers(2, 2**32 - 1), st.sampled_from([1, 2, 3, 256, 3200, 43000, 2**32])))
        v_min = draw(st.integers(0, 2**32 - B))
        n = draw(st.integers(1, size)) if i == n_blocks - 1 else size
        vals = draw(st.lists(st.integers(v_min, v_min + B - 1), min_size=n, max_size=n))
        # pin the range so the block base is exactly B
        vals[0] = v_min
        vals[-1] = v_min + B - 1
        blocks.append(vals)
    return size, blocks


@pytest.mark.parametrize("policy, scalar", [(CodecPolicy.FORCE_ADVANCED, pack_advanced), (CodecPolicy.FORCE_BASIC, pack_basic)])
@given(blocks=multi_block())
def test_engine_matches_scalar(policy, scalar, blocks):
    size, blocks = blocks
    flat = np.array([v for b in blocks for v in b], dtype=np.uint32)
    packed = compress_batch(flat, BlockPlan(size, policy))
    assert len(packed) == len(blocks)
    for i, vals in enumerate(blocks):
        block = packed.block(i)
        params = BaseParams(min(vals), max(vals))
        if params.B == 1:
            assert block.codec == _engine.CONSTANT and len(block.words) == 0
        elif params.B == 2**32:
            assert block.codec == _engine.RAW and block.words.tolist() == [v - params.v_min for v in vals]
        else:
            assert block.words.tolist() == scalar(vals, params)
    assert np.array_equal(decompress_batch(packed), flat)


def test_chunked_packing_spans_many_blocks(monkeypatch):
    monkeypatch.setattr(_engine, "_CHUNK_VALUES", 100)
    rng = np.random.default_rng(5)
    values = rng.integers(0, 5000, 5003).astype(np.uint32)
    a = compress_batch(values, BlockPlan(37, CodecPolicy.AUTO))
    monkeypatch.setattr(_engine, "_CHUNK_VALUES", 1 << 21)
    b = compress_batch(values, BlockPlan(37, CodecPolicy.AUTO))
    assert np.array_equal(a.words, b.words)
    monkeypatch.setattr(_engine, "_CHUNK_VALUES", 64)
    assert np.array_equal(decompress_batch(a), values)


def test_engine_detects_word_count_mismatch():
    packed = compress_batch(np.arange(100, dtype=np.uint32), BlockPlan(0, CodecPolicy.FORCE_ADVANCED))
    packed.word_counts = packed.word_counts + 1
    packed.words = np.append(packed.words, np.uint32(0))
    with pytest.raises(CorruptStream):
        decompress_batch(packed)


@pytest.mark.parametrize("policy", [CodecPolicy.FORCE_ADVANCED, CodecPolicy.FORCE_BASIC])
def test_engine_detects_tampered_words(policy):
    values = np.arange(3000, 3100, dtype=np.uint32)
    packed = compress_batch(values, BlockPlan(0, policy))
    packed.words = packed.words.copy()
    packed.words[-1] = np.uint32(2**32 - 1)
    with pytest.raises(CorruptStream):
        decompress_batch(packed)
