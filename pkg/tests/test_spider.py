import numpy as np
import pytest

from spiderbv.bits import BitVector
from spiderbv.datagen import gen_random
from spiderbv.errors import EmptyInputError, EmptySelectError
from spiderbv.oracle import all_ranks, all_selects, ranks_at
from spiderbv.sampling import interpolate, unwrap_offsets
from spiderbv.spider import (
    SUPERBLOCK,
    spider_build,
    spider_find_superblock,
    spider_predict,
    spider_rank,
    spider_select,
    spider_select_instrumented,
    spider_space,
)


def test_build_one_dense_superblock():
    idx = spider_build(BitVector.ones(SUPERBLOCK))
    assert idx.rank_array.tolist() == [0, SUPERBLOCK]
    np.testing.assert_array_equal(idx.local_ranks(), 496 * np.arange(128))


def test_build_all_zeros():
    idx = spider_build(BitVector.zeros(2 * SUPERBLOCK))
    assert idx.rank_array.tolist() == [0, 0, 0]
    assert not idx.local_ranks().any()
    assert idx.high_select.size == 0 and idx.low_select.size == 0


def test_build_rejects_empty():
    with pytest.raises(EmptyInputError):
        spider_build(BitVector.zeros(0))


def test_local_ranks_match_oracle():
    bv = gen_random(300_000, 0.37, seed=11)
    idx = spider_build(bv)
    ranks = np.concatenate([[0], all_ranks(bv)])
    starts = np.minimum(np.arange(idx.local_ranks().size) * 496, bv.n)
    sb_starts = (starts // SUPERBLOCK) * SUPERBLOCK
    np.testing.assert_array_equal(idx.local_ranks(), ranks[starts] - ranks[sb_starts])


def test_payload_survives_interleaving():
    bv = gen_random(200_001, 0.5, seed=2)
    assert spider_build(bv).to_bitvector() == bv


def test_rank_examples():
    dense = spider_build(BitVector.ones(4 * SUPERBLOCK))
    assert spider_rank(dense, SUPERBLOCK - 1) == SUPERBLOCK
    empty = spider_build(BitVector.zeros(5000))
    assert {spider_rank(empty, i) for i in (0, 1234, 4999)} == {0}
    with pytest.raises(IndexError):
        spider_rank(empty, 5000)


def test_rank_random_queries_match_oracle():
    bv = gen_random(10**6, 0.5, seed=1)
    idx = spider_build(bv)
    q = np.random.Generator(np.random.PCG64(3)).integers(0, bv.n, 10_000)
    np.testing.assert_array_equal(idx.rank_many(q), ranks_at(bv, q))
    assert all(spider_rank(idx, int(i)) == int(r) for i, r in zip(q[:200], ranks_at(bv, q[:200])))


def test_find_superblock_examples():
    dense = spider_build(BitVector.ones(4 * SUPERBLOCK))
    assert spider_find_superblock(dense, SUPERBLOCK + 1, 1) == 1
    assert spider_find_superblock(dense, 1, 0) == 0
    assert spider_find_superblock(dense, 3 * SUPERBLOCK, 3) == 2

    n = 5 * SUPERBLOCK
    tail = spider_build(BitVector.from_positions(n, [n - 10, n - 3]))
    assert spider_find_superblock(tail, 1, 0) == 4


def test_interpolation_examples():
    assert interpolate(0, 100, 2148, 0, 2048, 11, 1024) == 1124
    # j at a sample point: zero interpolation term
    assert interpolate(3 * SUPERBLOCK, 700, 900, 4096, 2048, 11, 4096) == 3 * SUPERBLOCK + 700


def test_interpolation_across_superblock_boundary():
    count_a = 2048 * 40
    a, b = unwrap_offsets(63000, 200, count_a + 5, count_a, SUPERBLOCK)
    assert (a, b) == (-488, 200)
    assert interpolate(SUPERBLOCK, a, b, count_a, 2048, 11, count_a + 1024) == 63344
    # the other direction moves b right instead
    assert unwrap_offsets(63000, 200, count_a - 5, count_a, SUPERBLOCK) == (63000, 200 + SUPERBLOCK)


def test_predict_is_exact_on_dense_vector():
    idx = spider_build(BitVector.ones(3 * SUPERBLOCK + 77))
    for j in (1, 2, 4095, 4096, 4097, SUPERBLOCK, SUPERBLOCK + 1, idx.n1):
        assert spider_predict(idx, j)[0] == j - 1
        assert spider_select_instrumented(idx, j) == (j - 1, 0)


def test_predict_reports_low_index_and_checks_superblock():
    idx = spider_build(gen_random(500_000, 0.5, seed=4))
    j = 100_000
    p, l = spider_predict(idx, j)
    assert l == (j - 1) // idx.sigma_l
    assert 0 <= p < idx.n_pad
    s = idx.predict_detail(j)[1]
    assert spider_predict(idx, j, s) == (p, l)
    with pytest.raises(ValueError):
        spider_predict(idx, j, s + 1)


def test_select_examples():
    dense = spider_build(BitVector.ones(4 * SUPERBLOCK))
    assert spider_select(dense, 70000) == 69999
    single = spider_build(BitVector.from_positions(300_000, [200_000]))
    assert spider_select(single, 1) == 200_000


def test_select_all_queries_sparse_random():
    bv = gen_random(10**6, 0.1, seed=9)
    idx = spider_build(bv)
    np.testing.assert_array_equal(idx.select_many(np.arange(1, bv.n1 + 1)), all_selects(bv))


def test_select_errors():
    with pytest.raises(EmptySelectError):
        spider_select(spider_build(BitVector.zeros(100)), 1)
    idx = spider_build(BitVector.ones(100))
    with pytest.raises(IndexError):
        spider_select(idx, 0)
    with pytest.raises(IndexError):
        spider_select(idx, 101)


def test_sampling_rates_at_half_density():
    idx = spider_build(BitVector.from_bits(np.tile([1, 0], SUPERBLOCK * 4)))
    assert (idx.sigma_h, idx.sigma_l) == (32768, 2048)


def test_space_dense_half_density():
    report = spider_space(spider_build(gen_random(SUPERBLOCK * 1000, 0.5, seed=0)))
    assert 3.3 <= report.overhead_pct <= 3.83


def test_space_without_ones_is_rank_only():
    report = spider_space(spider_build(BitVector.zeros(SUPERBLOCK * 200)))
    assert report.components["high_select"] == report.components["low_select"] == 0
    assert report.overhead_pct == pytest.approx(100 * (16 / 496 + 64 / SUPERBLOCK), abs=0.001)


@pytest.mark.parametrize("density", [0.001, 0.5, 0.999])
def test_select_is_an_increasing_inverse_of_rank(density):
    bv = gen_random(200_000, density, seed=21)
    idx = spider_build(bv)
    pos = idx.select_many(np.arange(1, bv.n1 + 1))
    assert (np.diff(pos) > 0).all()
    assert bv.to_bits()[pos].all()
    np.testing.assert_array_equal(idx.rank_many(pos), np.arange(1, bv.n1 + 1))


def test_well_specified_predictions_stay_between_anchors():
    bv = gen_random(4 * SUPERBLOCK, 0.5, seed=22)
    idx = spider_build(bv)
    low = idx.low_select.astype(np.int64)
    for j in range(1, bv.n1 + 1, 97):
        p, s, l = idx.predict_detail(j)
        a, b = low[l], low[l + 1]
        anchors_in_s = idx.rank_array[s] < max(1, l * idx.sigma_l) and min((l + 1) * idx.sigma_l, bv.n1) <= idx.rank_array[s + 1]
        if anchors_in_s and b >= a:
            assert SUPERBLOCK * s + a <= p <= SUPERBLOCK * s + b
