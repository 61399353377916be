import numpy as np
import pytest

from spiderbv.bits import BitVector
from spiderbv.datagen import gen_random
from spiderbv.layout import FLAT, INTERLEAVED
from spiderbv.ni_spider import NiSpiderIndex, ni_build
from spiderbv.spider import SpiderIndex, spider_build
from spiderbv.variants import (
    STRUCTURES,
    NiSpider2LSelectIndex,
    Spider1LSelectIndex,
    VariantConfig,
    build_structure,
    build_variant,
    strawman_build,
    strawman_rank,
    strawman_select,
)

CONFIGS = [VariantConfig(layout, levels) for layout in ("interleaved", "flat") for levels in ("one", "two")]


def test_config_dispatch():
    assert VariantConfig("interleaved", "two").index_class is SpiderIndex
    assert VariantConfig("flat", "one").index_class is NiSpiderIndex
    assert VariantConfig("interleaved", "one").index_class is Spider1LSelectIndex
    assert VariantConfig("flat", "two").index_class is NiSpider2LSelectIndex
    with pytest.raises(ValueError):
        VariantConfig("diagonal", "two")
    with pytest.raises(ValueError):
        VariantConfig("flat", "three")


def test_configs_equal_named_builders():
    bv = gen_random(150_000, 0.3, seed=2)
    q = np.arange(1, bv.n1 + 1)
    a, b = build_variant(bv, VariantConfig("interleaved", "two")), spider_build(bv)
    np.testing.assert_array_equal(a.select_many(q), b.select_many(q))
    c, d = build_variant(bv, VariantConfig("flat", "one")), ni_build(bv)
    np.testing.assert_array_equal(c.select_many(q), d.select_many(q))
    assert a.state.layout == INTERLEAVED and c.state.layout == FLAT


@pytest.mark.parametrize("config", CONFIGS, ids=lambda c: c.name)
def test_all_configs_match_oracle(config, oracle_check):
    bv = gen_random(10**6, 0.5, seed=12)
    oracle_check(build_variant(bv, config), bv)


def test_structure_names():
    assert set(STRUCTURES) == {"spider", "ni-spider", "spider-1L-select", "ni-spider-2L-select", "strawman"}
    with pytest.raises(ValueError):
        build_structure("rank9", BitVector.ones(10))


def test_strawman_examples(oracle_check):
    dense = strawman_build(BitVector.ones(20_000))
    assert strawman_rank(dense, 511) == 512
    assert strawman_select(dense, 513) == 512
    bv = gen_random(400_000, 0.1, seed=4)
    oracle_check(strawman_build(bv), bv)


def test_strawman_space_bound():
    report = strawman_build(BitVector.ones(512 * 8192)).space()
    assert report.overhead_pct <= 13.3
