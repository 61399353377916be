"""SPIDER: interleaved rank metadata with a two-level predictive select.

The bit vector is padded to a multiple of 63488 bits and rewritten as a
*modified bit vector* of 512-bit blocks, each holding a 16-bit local rank
followed by 496 original bits.  A 64-bit rank array stores the ones before
each 63488-bit superblock (128 blocks, so the block index shifted right by
7 gives the superblock).

Select uses a high-level array (nearest superblock of every ``sigma_h``-th
one) to start a superblock scan, then interpolates between the two
bracketing low-level samples (16-bit superblock offsets of every
``sigma_l``-th one) to predict a block, and scans from there.
"""
from __future__ import annotations

import numpy as np

from .bits import BitVector
from .index import TWO_LEVEL, RankSelectIndex
from .layout import INTERLEAVED, LOCAL_RANK_MASK, SPIDER_SUPERBLOCK, extract_payload
from .sampling import find_superblock, predict_two_level

SUPERBLOCK = SPIDER_SUPERBLOCK


class SpiderIndex(RankSelectIndex):
    name = "spider"
    layout = INTERLEAVED
    scheme = TWO_LEVEL

    @property
    def rank_array(self) -> np.ndarray:
        """Ones before each superblock, then an ``n1`` sentinel."""
        return self._st.sb_rank

    @property
    def modified(self) -> np.ndarray:
        """The modified bit vector as an ``(n_blocks, 8)`` uint64 array."""
        return self._st.blocks

    @property
    def sigma_h(self) -> int:
        return 1 << self._st.hi_shift

    @property
    def sigma_l(self) -> int:
        return 1 << self._st.lo_shift

    @property
    def high_select(self) -> np.ndarray:
        return self._st.hi

    @property
    def low_select(self) -> np.ndarray:
        return self._st.lo

    @property
    def n_superblocks(self) -> int:
        return len(self._st.sb_rank) - 1

    def local_ranks(self) -> np.ndarray:
        return (self._st.blocks[:, 0] & LOCAL_RANK_MASK).astype(np.int64)

    def find_superblock(self, j: int, s0: int) -> int:
        """Superblock ``s`` with ``rank_array[s] < j <= rank_array[s + 1]``, scanning from ``s0``."""
        self._check_select(j)
        if not 0 <= s0 < self.n_superblocks:
            raise IndexError(f"superblock {s0} out of range")
        return int(find_superblock(self._st.sb_rank, j, s0))

    def predict_detail(self, j: int) -> tuple[int, int, int]:
        """``(p, s, l)``: raw prediction, confirmed superblock and low-array index."""
        self._check_select(j)
        st = self._st
        p, s, l = predict_two_level(st.sb_rank, st.sb_bits, st.hi, st.hi_shift, st.lo, st.lo_shift, st.n1, j)
        return int(p), int(s), int(l)

    def to_bitvector(self) -> BitVector:
        """Recover the original vector from the modified bit vector."""
        nw = -(-self.n // 64)
        words = extract_payload(self._st.blocks, nw)
        if self.n % 64:
            words[-1] &= np.uint64((1 << (self.n % 64)) - 1)
        return BitVector(words, self.n)


def spider_build(bv: BitVector) -> SpiderIndex:
    return SpiderIndex.build(bv)


def spider_rank(idx: SpiderIndex, i: int) -> int:
    return idx.rank(i)


def spider_select(idx: SpiderIndex, j: int) -> int:
    return idx.select(j)


def spider_select_instrumented(idx: SpiderIndex, j: int) -> tuple[int, int]:
    return idx.select_instrumented(j)


def spider_find_superblock(idx: SpiderIndex, j: int, s0: int) -> int:
    return idx.find_superblock(j, s0)


def spider_predict(idx: SpiderIndex, j: int, s: int | None = None) -> tuple[int, int]:
    """Return ``(p, l)`` for select(j); ``p`` is clamped to the padded vector.

    ``s`` is accepted for symmetry with the scan contract and must, if
    given, be the superblock that contains the answer.
    """
    p, s_found, l = idx.predict_detail(j)
    if s is not None and s != s_found:
        raise ValueError(f"superblock {s} does not contain select({j}); expected {s_found}")
    return min(max(p, 0), idx.n_pad - 1), l


def spider_space(idx: SpiderIndex):
    return idx.space()
