"""Reference rank/select by direct counting.

Deliberately shares nothing with the index code beyond ``BitVector``: the
scalar functions walk the words with ``int.bit_count``-style counting and
the bulk helpers materialise every bit with numpy.  O(n) per query.
"""
from __future__ import annotations

import numpy as np

from .bits import BitVector
from .errors import EmptySelectError


def oracle_rank(bv: BitVector, i: int) -> int:
    """Number of 1 bits in positions ``0..i`` inclusive."""
    if not 0 <= i < bv.n:
        raise IndexError(f"rank index {i} out of range for length {bv.n}")
    return rank_before(bv, i + 1)


def rank_before(bv: BitVector, x: int) -> int:
    """Ones strictly before position ``x``; ``rank_before(bv, 0) == 0``.

    This is ``rank(x - 1)`` with the convention ``rank(-1) = 0``.
    """
    if not 0 <= x <= bv.n:
        raise IndexError(f"position {x} out of range for length {bv.n}")
    full, rest = divmod(x, 64)
    count = int(np.bitwise_count(bv.words[:full]).sum(dtype=np.int64))
    if rest:
        count += bin(int(bv.words[full]) & ((1 << rest) - 1)).count("1")
    return count


def oracle_select(bv: BitVector, j: int) -> int:
    """Position of the j-th (1-based) 1 bit."""
    n1 = bv.n1
    if n1 == 0:
        raise EmptySelectError("select on a vector with no 1 bits")
    if not 1 <= j <= n1:
        raise IndexError(f"select rank {j} out of range [1, {n1}]")
    seen = 0
    for w, word in enumerate(bv.words):
        word = int(word)
        c = bin(word).count("1")
        if seen + c >= j:
            for bit in range(64):
                if word >> bit & 1:
                    seen += 1
                    if seen == j:
                        return 64 * w + bit
        seen += c
    raise AssertionError("unreachable: n1 disagrees with the words")


def all_ranks(bv: BitVector) -> np.ndarray:
    """``rank(i)`` for every ``i`` as an int64 array."""
    return np.cumsum(bv.to_bits(), dtype=np.int64)


def all_selects(bv: BitVector) -> np.ndarray:
    """``select(j)`` for ``j = 1..n1``; element ``j - 1`` holds select(j)."""
    return np.flatnonzero(bv.to_bits()).astype(np.int64)


def _word_prefix(bv: BitVector) -> np.ndarray:
    prefix = np.zeros(len(bv.words) + 1, dtype=np.int64)
    np.cumsum(np.bitwise_count(bv.words), out=prefix[1:])
    return prefix


def _word_bits(words: np.ndarray) -> np.ndarray:
    return np.unpackbits(words.astype("<u8").view(np.uint8).reshape(-1, 8), axis=1, bitorder="little")


def ranks_at(bv: BitVector, positions) -> np.ndarray:
    """``rank(i)`` for each ``i`` in ``positions`` without materialising every rank."""
    pos = np.asarray(positions, dtype=np.int64)
    if pos.size and (pos.min() < 0 or pos.max() >= bv.n):
        raise IndexError("rank position out of range")
    prefix = _word_prefix(bv)
    w = pos >> 6
    bits = _word_bits(bv.words[w])
    within = np.cumsum(bits, axis=1, dtype=np.int64)[np.arange(pos.size), pos & 63]
    return prefix[w] + within


def selects_at(bv: BitVector, ranks) -> np.ndarray:
    """``select(j)`` for each 1-based ``j`` in ``ranks``."""
    js = np.asarray(ranks, dtype=np.int64)
    if js.size and (js.min() < 1 or js.max() > bv.n1):
        raise IndexError("select rank out of range")
    prefix = _word_prefix(bv)
    w = np.searchsorted(prefix, js, side="left") - 1
    need = js - prefix[w]
    counts = np.cumsum(_word_bits(bv.words[w]), axis=1, dtype=np.int64)
    bit = np.argmax(counts >= need[:, None], axis=1)
    return 64 * w + bit
