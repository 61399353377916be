"""Succinct rank/select bit vectors: SPIDER and its non-interleaved variant."""
from .bits import BitVector, get_bit, rank_in_block, select_in_block, select_in_word
from .errors import EmptyInputError, EmptySelectError, FormatError, InvariantError
from .ni_spider import NiSpiderIndex, ni_build
from .spider import SpiderIndex, spider_build
from .variants import (
    STRUCTURES,
    NiSpider2LSelectIndex,
    Spider1LSelectIndex,
    StrawmanIndex,
    VariantConfig,
    build_structure,
    build_variant,
)

__all__ = [
    "BitVector",
    "EmptyInputError",
    "EmptySelectError",
    "FormatError",
    "InvariantError",
    "NiSpider2LSelectIndex",
    "NiSpiderIndex",
    "STRUCTURES",
    "Spider1LSelectIndex",
    "SpiderIndex",
    "StrawmanIndex",
    "VariantConfig",
    "build_structure",
    "build_variant",
    "get_bit",
    "ni_build",
    "rank_in_block",
    "select_in_block",
    "select_in_word",
    "spider_build",
]
