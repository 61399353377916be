"""Non-interleaved SPIDER.

Leaves the bit vector untouched (apart from zero padding to a multiple of
65536 bits) and keeps two flat rank arrays beside it: 64-bit ranks per
65536-bit superblock and 16-bit local ranks per 512-bit block.  Select
interpolates between adjacent entries of a single 64-bit sample array.
"""
from __future__ import annotations

import numpy as np

from .bits import BitVector
from .index import ONE_LEVEL, RankSelectIndex
from .layout import FLAT


class NiSpiderIndex(RankSelectIndex):
    name = "ni-spider"
    layout = FLAT
    scheme = ONE_LEVEL

    @property
    def l1_rank(self) -> np.ndarray:
        return self._st.sb_rank

    @property
    def l2_rank(self) -> np.ndarray:
        return self._st.l2

    @property
    def sigma(self) -> int:
        return 1 << self._st.hi_shift

    @property
    def select_array(self) -> np.ndarray:
        return self._st.hi

    @property
    def words(self) -> np.ndarray:
        """The padded bit vector words (a view, no copy)."""
        return self._st.blocks.reshape(-1)

    def to_bitvector(self) -> BitVector:
        nw = -(-self.n // 64)
        words = self.words[:nw].copy()
        return BitVector(words, self.n)


def ni_build(bv: BitVector) -> NiSpiderIndex:
    return NiSpiderIndex.build(bv)


def ni_rank(idx: NiSpiderIndex, i: int) -> int:
    return idx.rank(i)


def ni_select(idx: NiSpiderIndex, j: int) -> int:
    return idx.select(j)


def ni_select_instrumented(idx: NiSpiderIndex, j: int) -> tuple[int, int]:
    return idx.select_instrumented(j)


def ni_space(idx: NiSpiderIndex):
    return idx.space()
