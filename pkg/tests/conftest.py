import numpy as np
import pytest

from spiderbv.oracle import all_ranks, all_selects


def check_against_oracle(idx, bv):
    """Every rank and every select must equal the linear-scan answers."""
    assert idx.n == bv.n and idx.n1 == bv.n1
    np.testing.assert_array_equal(idx.rank_many(np.arange(bv.n)), all_ranks(bv))
    if bv.n1:
        np.testing.assert_array_equal(idx.select_many(np.arange(1, bv.n1 + 1)), all_selects(bv))


@pytest.fixture
def oracle_check():
    return check_against_oracle
