import csv

import numpy as np
import pytest

from spiderbv.bench import CSV_COLUMNS, accuracy_report, make_workload, run_bench, verify, write_csv
from spiderbv.bits import BitVector
from spiderbv.datagen import gen_random
from spiderbv.errors import EmptySelectError
from spiderbv.spider import spider_build
from spiderbv.variants import STRUCTURES, build_structure


@pytest.mark.parametrize("name", sorted(STRUCTURES))
def test_verify_full_passes(name):
    bv = gen_random(150_000, 0.5, seed=1)
    res = verify(build_structure(name, bv), bv, "full")
    assert res.ok and res.checked_rank == bv.n and res.checked_select == bv.n1


def test_verify_sampled():
    bv = gen_random(300_000, 0.2, seed=3)
    res = verify(build_structure("ni-spider", bv), bv, 5000, seed=1)
    assert res.ok and res.checked_rank == 5000 and res.checked_select == 5000


def test_verify_without_ones_checks_rank_only():
    bv = BitVector.zeros(10_000)
    res = verify(spider_build(bv), bv, 1000)
    assert res.ok and res.checked_rank == 1000 and res.checked_select == 0


def test_verify_catches_corrupt_local_rank():
    bv = gen_random(100_000, 0.5, seed=2)
    idx = spider_build(bv)
    idx.state.blocks[5, 0] += np.uint64(1)
    res = verify(idx, bv, "full")
    assert not res.ok
    assert res.counterexample.startswith("rank(")


def test_workloads_are_in_range_and_reproducible():
    w = make_workload("select", 1000, 40, 10_000, seed=3)
    assert w.queries.min() >= 1 and w.queries.max() <= 40
    np.testing.assert_array_equal(w.queries, make_workload("select", 1000, 40, 10_000, seed=3).queries)
    r = make_workload("rank", 1000, 40, 10_000, seed=3).queries
    assert r.min() >= 0 and r.max() <= 999
    with pytest.raises(EmptySelectError):
        make_workload("select", 1000, 0, 10, seed=0)


def test_accuracy_zero_on_uniform_spacing():
    idx = spider_build(BitVector.from_bits(np.tile([1, 0, 0, 0], 50_000)))
    assert accuracy_report(idx, np.arange(1, idx.n1 + 1)) == 0.0


def test_bench_checksums_stable_and_csv(tmp_path):
    bv = gen_random(200_000, 0.5, seed=4)
    reports = [run_bench(bv, name, warmup=1000, queries=5000, reps=3, seed=7, dataset="r")
               for name in ("spider", "strawman")]
    for rep in reports:
        for res in rep.kinds.values():
            assert len(res.checksums) == 3 and len(set(res.checksums)) == 1
            assert res.mean_ns > 0
    path = tmp_path / "out.csv"
    write_csv(reports, path)
    with open(path) as f:
        rows = list(csv.DictReader(f))
    assert list(rows[0]) == CSV_COLUMNS
    assert len(rows) == 4
    assert rows[0]["mean_wrong_blocks"] == "" and float(rows[1]["mean_wrong_blocks"]) >= 0
