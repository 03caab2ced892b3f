import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from treelabels.bitcodec import (
    BitCursor,
    BitString,
    BitWriter,
    CodecError,
    LabelBuffer,
    header_cost,
    uint_cost,
    width_for,
)


def test_width_for_frozen():
    assert [width_for(k) for k in (1, 2, 3, 4, 5, 8, 9, 1023, 1024, 1025)] == [
        1, 1, 2, 2, 3, 3, 4, 10, 10, 11,
    ]


def test_width_for_covers_range():
    for k in range(1, 300):
        w = width_for(k)
        assert 2**w >= k
        assert w == 1 or 2 ** (w - 1) < k


def test_uint_frozen_bit_patterns():
    frozen = {
        0: "10",
        1: "11",
        2: "01110",
        5: "00110101",
        37: "0001101100101",
        2**20: "00000110100100000000000000000000",
    }
    for v, expect in frozen.items():
        w = BitWriter()
        w.write_uint(v)
        assert w.freeze().to01() == expect
        assert uint_cost(v) == len(expect)


def test_header_cost_frozen():
    assert [header_cost(k) for k in (1, 2, 3, 4, 16, 64, 2**20)] == [1, 1, 3, 3, 5, 7, 11]


@given(st.integers(min_value=0, max_value=2**64))
def test_uint_roundtrip(v):
    w = BitWriter()
    w.write_uint(v)
    bs = w.freeze()
    cur = BitCursor(bs)
    assert cur.read_uint() == v
    assert cur.remaining() == 0


@given(st.integers(min_value=1, max_value=2**32 - 1))
def test_unary_header_roundtrip(k):
    w = BitWriter()
    width = w.write_unary_header(k)
    assert width == width_for(k)
    w.write_fixed(k - 1, width)
    cur = BitCursor(w.freeze())
    assert cur.read_unary_header() == width
    assert cur.read_fixed(width) == k - 1


@given(st.lists(st.integers(min_value=0, max_value=2**40), max_size=12))
def test_uint_stream_roundtrip(values):
    w = BitWriter()
    for v in values:
        w.write_uint(v)
    cur = BitCursor(w.freeze())
    assert [cur.read_uint() for _ in values] == values
    assert cur.remaining() == 0


@given(st.integers(min_value=0, max_value=2**200), st.integers(min_value=0, max_value=60))
def test_fixed_width_roundtrip(v, extra):
    width = max(v.bit_length(), 1) + extra
    w = BitWriter()
    w.write_fixed(v, width)
    bs = w.freeze()
    assert bs.nbits == width
    assert BitCursor(bs).read_fixed(width) == v


def test_zero_width_field_is_legal():
    w = BitWriter()
    w.write_fixed(0, 0)
    w.write_fixed(5, 3)
    bs = w.freeze()
    assert bs.nbits == 3
    cur = BitCursor(bs)
    assert cur.read_fixed(0) == 0
    assert cur.read_fixed(3) == 5


def test_write_fixed_rejects_overflow():
    w = BitWriter()
    with pytest.raises(CodecError):
        w.write_fixed(4, 2)
    with pytest.raises(CodecError):
        w.write_fixed(1, 0)


def test_read_past_end_raises():
    w = BitWriter()
    w.write_fixed(3, 2)
    cur = BitCursor(w.freeze())
    cur.read_fixed(2)
    with pytest.raises(CodecError):
        cur.read_fixed(1)


@given(st.text(alphabet="01", min_size=0, max_size=200))
def test_bitstring_01_roundtrip(s):
    bs = BitString.from01(s)
    assert bs.nbits == len(s)
    assert bs.to01() == s
    assert [bs.bit(i) for i in range(len(s))] == [int(c) for c in s]


@given(st.text(alphabet="01", min_size=1, max_size=200))
def test_hex_roundtrip(s):
    bs = BitString.from01(s)
    back = BitString.from_hex(bs.to_hex(), bs.nbits)
    assert back == bs
    assert hash(back) == hash(bs)


def test_hex_frozen():
    assert BitString.from01("10110").to_hex() == "b0"


def test_from_hex_rejects_dirty_padding():
    # 5-bit strings use one byte; the low 3 bits must be zero
    with pytest.raises(CodecError):
        BitString.from_hex("b7", 5)
    with pytest.raises(CodecError):
        BitString.from_hex("b0", 20)


def test_label_buffer_slices_match_inputs(rng):
    labels = []
    for _ in range(50):
        nbits = int(rng.integers(1, 200))
        bits = "".join("1" if b else "0" for b in rng.integers(0, 2, nbits))
        labels.append(BitString.from01(bits))
    buf = LabelBuffer.from_bitstrings(labels)
    for i, lab in enumerate(labels):
        assert buf[i] == lab


@settings(max_examples=30)
@given(st.integers(min_value=1, max_value=2**62))
def test_header_cost_matches_written_bits(k):
    w = BitWriter()
    w.write_unary_header(k)
    assert w.freeze().nbits == header_cost(k)
