import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spiderbv.bits import (
    HAS_BMI2,
    BitVector,
    get_bit,
    rank_in_block,
    select_in_block,
    select_in_word,
    select_in_word_many,
)
from spiderbv.errors import InvariantError

ALL_ONES = (1 << 64) - 1
PATHS = ["portable"] + (["hardware"] if HAS_BMI2 else [])


def naive_select(w, k):
    for p in range(64):
        if w >> p & 1:
            k -= 1
            if k == 0:
                return p
    return 64


def block_with(positions):
    block = np.zeros(8, dtype=np.uint64)
    for p in positions:
        block[p // 64] |= np.uint64(1 << (p % 64))
    return block


def test_get_bit_examples():
    assert get_bit(BitVector.from_bits("1011"), 1) == 0
    assert get_bit(BitVector.zeros(100), 50) == 0
    assert get_bit(BitVector.ones(64), 63) == 1


def test_get_bit_out_of_range():
    with pytest.raises(IndexError):
        get_bit(BitVector.zeros(10), 10)
    with pytest.raises(IndexError):
        BitVector.ones(3)[-1]


@pytest.mark.parametrize("path", PATHS)
def test_select_in_word_examples(path):
    assert select_in_word(0b1010, 2, path) == 3
    assert select_in_word(ALL_ONES, 17, path) == 16
    assert select_in_word(1 << 63, 1, path) == 63


@pytest.mark.parametrize("path", PATHS)
def test_select_in_word_sentinel(path):
    assert select_in_word(0, 1, path) == 64
    assert select_in_word(0b111, 4, path) == 64
    assert select_in_word(ALL_ONES, 65, path) == 64


@pytest.mark.parametrize("path", PATHS)
@settings(max_examples=300, deadline=None)
@given(w=st.integers(0, ALL_ONES), k=st.integers(1, 65))
def test_select_in_word_matches_bit_loop(path, w, k):
    assert select_in_word(w, k, path) == naive_select(w, k)


@pytest.mark.skipif(not HAS_BMI2, reason="no BMI2 on this CPU")
def test_hardware_and_portable_agree_on_random_words():
    rng = np.random.Generator(np.random.PCG64(7))
    words = rng.integers(0, 2**64, size=200_000, dtype=np.uint64)
    ks = rng.integers(1, 66, size=words.size)
    np.testing.assert_array_equal(
        select_in_word_many(words, ks, "hardware"), select_in_word_many(words, ks, "portable")
    )


def test_unknown_path_rejected():
    with pytest.raises(ValueError):
        select_in_word(1, 1, "magic")


def test_rank_in_block_examples():
    payload_ones = np.full(8, ALL_ONES, dtype=np.uint64)
    assert rank_in_block(payload_ones, 511, skip=16) == 496
    assert rank_in_block(np.zeros(8, np.uint64), 300, skip=0) == 0
    assert rank_in_block(block_with([16, 100, 511]), 100, skip=16) == 2


def test_rank_in_block_ignores_skipped_bits():
    block = block_with([0, 5, 15, 16, 64])
    assert rank_in_block(block, 16, skip=16) == 1
    assert rank_in_block(block, 64, skip=16) == 2
    assert rank_in_block(block, 64, skip=0) == 5


def test_select_in_block_examples():
    assert select_in_block(block_with([16, 100, 511]), 3, skip=16) == 511
    assert select_in_block(np.full(8, ALL_ONES, dtype=np.uint64), 1, skip=16) == 16
    assert select_in_block(np.full(8, ALL_ONES, dtype=np.uint64), 64, skip=0) == 63


def test_select_in_block_overflow_is_an_invariant_error():
    with pytest.raises(InvariantError):
        select_in_block(block_with([16, 100]), 3, skip=16)
    with pytest.raises(InvariantError):
        select_in_block(block_with([3]), 1, skip=16)


@settings(max_examples=100, deadline=None)
@given(pos=st.sets(st.integers(0, 511), max_size=80), skip=st.sampled_from([0, 16]))
def test_block_rank_select_inverse(pos, skip):
    block = block_with(pos)
    live = sorted(p for p in pos if p >= skip)
    for k, p in enumerate(live, start=1):
        assert select_in_block(block, k, skip) == p
        assert rank_in_block(block, p, skip) == k


def test_bitvector_validation():
    with pytest.raises(ValueError):
        BitVector(np.zeros(2, np.uint64), 64)
    with pytest.raises(ValueError):
        BitVector(np.array([1 << 10], dtype=np.uint64), 10)
    with pytest.raises(ValueError):
        BitVector.from_bits([0, 2])


def test_bitvector_constructors_agree():
    bits = "1100101" * 20
    a = BitVector.from_bits(bits)
    b = BitVector.from_positions(len(bits), [i for i, c in enumerate(bits) if c == "1"])
    assert a == b
    assert a.n1 == bits.count("1")
    assert "".join(map(str, a.to_bits())) == bits
    assert BitVector.ones(130).n1 == 130
    assert BitVector.zeros(130).n1 == 0
