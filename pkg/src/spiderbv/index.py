"""Query engine shared by every index structure.

An index is a rank layout (``layout.py``) plus a select scheme
(``sampling.py``).  Both are flattened into a ``KernelState`` named tuple
so that one set of compiled kernels answers queries for all structures;
the layout/scheme codes are branched on at run time.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from numba import njit

from .bits import BitVector, rank_in_block_at, select_in_block_at
from .errors import EmptyInputError, EmptySelectError
from .layout import (
    FLAT,
    GEOMETRY,
    INTERLEAVED,
    LINES,
    LOCAL_RANK_MASK,
    build_flat,
    build_interleaved,
    build_lines,
    padded_length,
)
from .sampling import (
    build_one_level,
    build_sampled,
    build_two_level,
    predict_one_level,
    predict_two_level,
)

TWO_LEVEL = 0
ONE_LEVEL = 1
SAMPLED = 2


class KernelState(NamedTuple):
    layout: int
    scheme: int
    n: int
    n1: int
    n_pad: int
    n_blocks: int
    payload: int
    skip: int
    sb_bits: int
    sb_rank: np.ndarray     # int64, one per superblock plus an n1 sentinel
    blocks: np.ndarray      # uint64 (n_blocks, 8)
    l2: np.ndarray          # uint16 second-level ranks (flat layout only)
    hi: np.ndarray          # int64: high-level / one-level / strawman samples
    hi_shift: int
    lo: np.ndarray          # uint16 low-level offsets (two-level only)
    lo_shift: int


@njit(cache=True)
def ones_before(st, b):
    """Number of ones before basic block ``b``."""
    if b >= st.n_blocks:
        return st.n1
    if st.layout == INTERLEAVED:
        return st.sb_rank[b >> 7] + np.int64(st.blocks[b, 0] & LOCAL_RANK_MASK)
    if st.layout == FLAT:
        return st.sb_rank[b >> 7] + np.int64(st.l2[b])
    return st.sb_rank[b]


@njit(cache=True)
def rank_kernel(st, i):
    b = i // st.payload
    off = i - b * st.payload
    return ones_before(st, b) + rank_in_block_at(st.blocks, b, off + st.skip, st.skip)


@njit(cache=True)
def predict_kernel(st, j):
    """Predicted bit position of the j-th one, clamped to the padded vector."""
    if st.scheme == TWO_LEVEL:
        p = predict_two_level(st.sb_rank, st.sb_bits, st.hi, st.hi_shift, st.lo, st.lo_shift, st.n1, j)[0]
    elif st.scheme == ONE_LEVEL:
        p = predict_one_level(st.hi, st.hi_shift, st.n1, j)
    else:
        p = st.hi[(j - 1) >> st.hi_shift]
    if p < 0:
        p = 0
    elif p > st.n_pad - 1:
        p = st.n_pad - 1
    return p


@njit(cache=True)
def select_kernel(st, j):
    """Return ``(position, wrong_blocks)`` for the j-th one."""
    b = predict_kernel(st, j) // st.payload
    start = b
    while ones_before(st, b) >= j:
        b -= 1
    while ones_before(st, b + 1) < j:
        b += 1
    r = ones_before(st, b)
    off = select_in_block_at(st.blocks, b, j - r, st.skip)
    return b * st.payload + off - st.skip, abs(b - start)


@njit(cache=True)
def rank_batch(st, queries, out):
    for q in range(len(queries)):
        out[q] = rank_kernel(st, queries[q])


@njit(cache=True)
def select_batch(st, queries, out, wrong):
    for q in range(len(queries)):
        out[q], wrong[q] = select_kernel(st, queries[q])


@njit(cache=True)
def rank_checksum(st, queries):
    acc = 0
    for q in range(len(queries)):
        acc ^= rank_kernel(st, queries[q]) + q
    return acc


@njit(cache=True)
def select_checksum(st, queries):
    acc = 0
    for q in range(len(queries)):
        acc ^= select_kernel(st, queries[q])[0] + q
    return acc


def _log2(x: int) -> int:
    return x.bit_length() - 1


_EMPTY_U16 = np.zeros(0, dtype=np.uint16)


def assemble(bv: BitVector, layout: int, scheme: int) -> tuple[KernelState, dict]:
    """Build the arrays for ``layout`` + ``scheme`` over ``bv``.

    Returns the kernel state and a dict of named parameters (sigmas) that
    the concrete index classes expose.
    """
    n = bv.n
    if n == 0:
        raise EmptyInputError("cannot index an empty bit vector")
    payload, skip, sb_bits, _ = GEOMETRY[layout]
    n_pad = padded_length(n, layout)
    n_blocks = n_pad // payload
    words = bv.padded_words(n_pad)
    l2 = _EMPTY_U16
    if layout == INTERLEAVED:
        sb_rank, blocks = build_interleaved(words, n_blocks)
    elif layout == FLAT:
        blocks = words[:-1].reshape(n_blocks, 8)
        sb_rank, l2 = build_flat(words, n_blocks)
    elif layout == LINES:
        blocks = words[:-1].reshape(n_blocks, 8)
        sb_rank = build_lines(words, n_blocks)
    else:
        raise ValueError(f"unknown layout {layout}")
    n1 = int(sb_rank[-1])
    if bv._n1 is None:
        bv._n1 = n1

    params = {}
    lo, lo_shift = _EMPTY_U16, 0
    if scheme == TWO_LEVEL:
        sigma_h, hi, sigma_l, lo = build_two_level(words, n, n1, n_pad, sb_bits)
        hi_shift, lo_shift = _log2(sigma_h), _log2(sigma_l)
        params.update(sigma_h=sigma_h, sigma_l=sigma_l)
    elif scheme == ONE_LEVEL:
        sigma, hi = build_one_level(words, n, n1)
        hi_shift = _log2(sigma)
        params.update(sigma=sigma)
    elif scheme == SAMPLED:
        hi = build_sampled(words, n1)
        hi_shift = _log2(8192)
        params.update(sigma=8192)
    else:
        raise ValueError(f"unknown select scheme {scheme}")

    st = KernelState(
        layout, scheme, n, n1, n_pad, n_blocks, payload, skip, sb_bits,
        sb_rank, blocks, l2, hi, hi_shift, lo, lo_shift,
    )
    return st, params


@dataclass
class SpaceReport:
    """Index space in bits per component, relative to the ``n`` data bits."""

    n: int
    components: dict = field(default_factory=dict)

    @property
    def overhead_bits(self) -> int:
        return sum(self.components.values())

    @property
    def overhead_pct(self) -> float:
        return 100.0 * self.overhead_bits / self.n

    @property
    def component_bytes(self) -> dict:
        return {k: -(-v // 8) for k, v in self.components.items()}

    @property
    def data_bytes(self) -> int:
        return -(-self.n // 8)


class RankSelectIndex:
    """Common query API over a ``KernelState``."""

    name = "index"
    layout = INTERLEAVED
    scheme = TWO_LEVEL

    def __init__(self, state: KernelState, params: dict | None = None):
        self._st = state
        self.params = dict(params or {})

    @classmethod
    def build(cls, bv: BitVector):
        st, params = assemble(bv, cls.layout, cls.scheme)
        return cls(st, params)

    @property
    def state(self) -> KernelState:
        return self._st

    @property
    def n(self) -> int:
        return self._st.n

    @property
    def n1(self) -> int:
        return self._st.n1

    @property
    def n_pad(self) -> int:
        return self._st.n_pad

    def __len__(self):
        return self._st.n

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n}, n1={self.n1})"

    def rank(self, i: int) -> int:
        """Number of ones in positions ``0..i``."""
        if not 0 <= i < self._st.n:
            raise IndexError(f"rank index {i} out of range for length {self._st.n}")
        return int(rank_kernel(self._st, i))

    def _check_select(self, j):
        if self._st.n1 == 0:
            raise EmptySelectError("select on a vector with no 1 bits")
        if not 1 <= j <= self._st.n1:
            raise IndexError(f"select rank {j} out of range [1, {self._st.n1}]")

    def select(self, j: int) -> int:
        """Position of the j-th one (1-based)."""
        return self.select_instrumented(j)[0]

    def select_instrumented(self, j: int) -> tuple[int, int]:
        """``(select(j), wrong_blocks)``; wrong_blocks counts blocks scanned past."""
        self._check_select(j)
        pos, wrong = select_kernel(self._st, j)
        return int(pos), int(wrong)

    def predict(self, j: int) -> int:
        """Clamped predicted position for select(j), before the block scan."""
        self._check_select(j)
        return int(predict_kernel(self._st, j))

    def rank_many(self, queries) -> np.ndarray:
        q = np.ascontiguousarray(queries, dtype=np.int64)
        if q.size and (q.min() < 0 or q.max() >= self._st.n):
            raise IndexError("rank query out of range")
        out = np.empty(q.size, dtype=np.int64)
        rank_batch(self._st, q, out)
        return out

    def select_many(self, queries) -> np.ndarray:
        return self.select_instrumented_many(queries)[0]

    def select_instrumented_many(self, queries) -> tuple[np.ndarray, np.ndarray]:
        q = np.ascontiguousarray(queries, dtype=np.int64)
        if q.size:
            if self._st.n1 == 0:
                raise EmptySelectError("select on a vector with no 1 bits")
            if q.min() < 1 or q.max() > self._st.n1:
                raise IndexError("select query out of range")
        out = np.empty(q.size, dtype=np.int64)
        wrong = np.empty(q.size, dtype=np.int64)
        select_batch(self._st, q, out, wrong)
        return out, wrong

    def _layout_space(self, report: SpaceReport):
        st = self._st
        if st.layout == INTERLEAVED:
            report.components["rank_array"] = 64 * len(st.sb_rank)
            report.components["local_ranks_and_padding"] = 512 * st.n_blocks - st.n
        elif st.layout == FLAT:
            report.components["l1_rank"] = 64 * len(st.sb_rank)
            report.components["l2_rank"] = 16 * len(st.l2)
            report.components["padding"] = st.n_pad - st.n
        else:
            report.components["rank_array"] = 64 * len(st.sb_rank)
            report.components["padding"] = st.n_pad - st.n

    def _scheme_space(self, report: SpaceReport):
        st = self._st
        if st.scheme == TWO_LEVEL:
            report.components["high_select"] = 64 * len(st.hi)
            report.components["low_select"] = 16 * len(st.lo)
        else:
            report.components["select_array"] = 64 * len(st.hi)

    def space(self) -> SpaceReport:
        report = SpaceReport(self._st.n)
        self._layout_space(report)
        self._scheme_space(report)
        return report
