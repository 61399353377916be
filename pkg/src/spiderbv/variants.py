"""Hybrid SPIDER variants and the strawman baseline.

``VariantConfig`` picks a rank layout (interleaved or flat) and a select
array depth (one or two levels).  Two of the four combinations are SPIDER
and non-interleaved SPIDER themselves; the other two are:

* ``spider-1L-select``: interleaved ranks, one-level 64-bit select array;
* ``ni-spider-2L-select``: flat ranks, two-level select arrays keyed to
  65536-bit superblocks.

The strawman keeps a 64-bit rank per 512-bit line and samples every
8192nd one; select starts at the sampled one's line and scans forward.
"""
from __future__ import annotations

from dataclasses import dataclass

from .bits import BitVector
from .index import ONE_LEVEL, SAMPLED, TWO_LEVEL, RankSelectIndex
from .layout import FLAT, INTERLEAVED, LINES
from .ni_spider import NiSpiderIndex
from .spider import SpiderIndex


class Spider1LSelectIndex(RankSelectIndex):
    name = "spider-1L-select"
    layout = INTERLEAVED
    scheme = ONE_LEVEL


class NiSpider2LSelectIndex(RankSelectIndex):
    name = "ni-spider-2L-select"
    layout = FLAT
    scheme = TWO_LEVEL


class StrawmanIndex(RankSelectIndex):
    name = "strawman"
    layout = LINES
    scheme = SAMPLED

    @property
    def rank_array(self):
        return self._st.sb_rank

    @property
    def select_array(self):
        return self._st.hi


@dataclass(frozen=True)
class VariantConfig:
    rank_layout: str    # "interleaved" | "flat"
    select_levels: str  # "one" | "two"

    def __post_init__(self):
        if self.rank_layout not in ("interleaved", "flat"):
            raise ValueError(f"rank_layout must be 'interleaved' or 'flat', got {self.rank_layout!r}")
        if self.select_levels not in ("one", "two"):
            raise ValueError(f"select_levels must be 'one' or 'two', got {self.select_levels!r}")

    @property
    def index_class(self):
        return _BY_CONFIG[(self.rank_layout, self.select_levels)]

    @property
    def name(self) -> str:
        return self.index_class.name


_BY_CONFIG = {
    ("interleaved", "two"): SpiderIndex,
    ("interleaved", "one"): Spider1LSelectIndex,
    ("flat", "one"): NiSpiderIndex,
    ("flat", "two"): NiSpider2LSelectIndex,
}

STRUCTURES = {
    "spider": SpiderIndex,
    "ni-spider": NiSpiderIndex,
    "spider-1L-select": Spider1LSelectIndex,
    "ni-spider-2L-select": NiSpider2LSelectIndex,
    "strawman": StrawmanIndex,
}


def build_variant(bv: BitVector, config: VariantConfig) -> RankSelectIndex:
    return config.index_class.build(bv)


def build_structure(name: str, bv: BitVector) -> RankSelectIndex:
    try:
        cls = STRUCTURES[name]
    except KeyError:
        raise ValueError(f"unknown structure {name!r}; choose from {sorted(STRUCTURES)}") from None
    return cls.build(bv)


def strawman_build(bv: BitVector) -> StrawmanIndex:
    return StrawmanIndex.build(bv)


def strawman_rank(idx: StrawmanIndex, i: int) -> int:
    return idx.rank(i)


def strawman_select(idx: StrawmanIndex, j: int) -> int:
    return idx.select(j)
