"""Select sample arrays and the interpolation predictors that use them.

Two-level scheme (used by SPIDER): a 64-bit high-level array maps every
``sigma_h``-th one to its nearest superblock, and a 16-bit low-level array
stores the superblock offset of every ``sigma_l``-th one.  One-level
scheme (used by the non-interleaved variant): a 64-bit array of absolute
positions of every ``sigma``-th one.  Strawman: absolute positions of ones
``sigma * i + 1`` with a fixed ``sigma`` of 8192, used without
interpolation.

In both interpolating schemes a segment runs from the sampled one with
rank ``max(1, sigma * m)`` to the sampled one with rank
``min(sigma * (m + 1), n1)``; entry 0 therefore holds ``select(1)`` and
the last entry ``select(n1)``.  Interpolation divides by the number of
ones the segment actually spans, which is ``sigma`` (a shift) everywhere
except the first and last segment.
"""
from fractions import Fraction

import numpy as np
from numba import njit

from .bits import popcount, word_select

STRAWMAN_SIGMA = 8192
LOW_SAMPLE_RATE = Fraction(405504, 100)     # 4096 * 0.99
ONE_LEVEL_RATE = 16384


def pow2_at_least(x: Fraction) -> int:
    """Smallest power of two >= x, and at least 1."""
    k = 1
    while k < x:
        k <<= 1
    return k


def sampling_threshold(rate, n: int, n1: int) -> int:
    """``max(1, 2 ** ceil(log2(rate * n1 / n)))`` in exact arithmetic."""
    if n1 == 0:
        return 1
    return pow2_at_least(Fraction(rate) * n1 / n)


@njit(cache=True)
def sample_positions(words, ranks):
    """Positions of the ones with the given sorted 1-based ranks."""
    out = np.empty(len(ranks), dtype=np.int64)
    q = 0
    seen = 0
    for w in range(len(words)):
        if q == len(ranks):
            break
        c = popcount(words[w])
        while q < len(ranks) and seen + c >= ranks[q]:
            out[q] = 64 * w + word_select(words[w], ranks[q] - seen)
            q += 1
        seen += c
    return out


def _segment_ranks(sigma: int, n1: int) -> np.ndarray:
    # 1, sigma, 2 sigma, ..., (n1 // sigma) sigma, n1
    ranks = np.arange(n1 // sigma + 2, dtype=np.int64) * sigma
    ranks[0] = 1
    ranks[-1] = n1
    return ranks


def build_two_level(words, n: int, n1: int, n_pad: int, superblock: int):
    """Return ``(sigma_h, high_select, sigma_l, low_select)``.

    High entry ``i`` is the superblock nearest to ``select(i * sigma_h + 1)``
    for ``i <= (n1 - 1) // sigma_h``, followed by the last superblock index.
    """
    sigma_h = sampling_threshold(superblock, n, n1)
    sigma_l = sampling_threshold(LOW_SAMPLE_RATE, n, n1)
    if n1 == 0:
        return sigma_h, np.zeros(0, np.int64), sigma_l, np.zeros(0, np.uint16)
    high_ranks = np.arange((n1 - 1) // sigma_h + 1, dtype=np.int64) * sigma_h + 1
    high_pos = sample_positions(words, high_ranks)
    high = np.empty(len(high_ranks) + 1, dtype=np.int64)
    high[:-1] = (high_pos + superblock // 2) // superblock
    high[-1] = n_pad // superblock - 1
    low_pos = sample_positions(words, _segment_ranks(sigma_l, n1))
    low = (low_pos % superblock).astype(np.uint16)
    return sigma_h, high, sigma_l, low


def build_one_level(words, n: int, n1: int):
    """Return ``(sigma, select_array)`` with ``sigma`` from the 16384 rule."""
    sigma = sampling_threshold(ONE_LEVEL_RATE, n, n1)
    if n1 == 0:
        return sigma, np.zeros(0, np.int64)
    return sigma, sample_positions(words, _segment_ranks(sigma, n1))


def build_sampled(words, n1: int, sigma: int = STRAWMAN_SIGMA):
    if n1 == 0:
        return np.zeros(0, np.int64)
    ranks = np.arange((n1 - 1) // sigma + 1, dtype=np.int64) * sigma + 1
    return sample_positions(words, ranks)


@njit(cache=True)
def find_superblock(sb_rank, j, s):
    """Walk from ``s`` to the superblock with ``sb_rank[s] < j <= sb_rank[s + 1]``."""
    while j <= sb_rank[s]:
        s -= 1
    while j > sb_rank[s + 1]:
        s += 1
    return s


@njit(cache=True)
def interpolate(base, a, b, count_a, span, shift, j):
    """Predicted position of the j-th one between two sampled ones.

    ``a`` and ``b`` are the sampled positions relative to ``base``;
    ``count_a`` is the rank of the one at ``a`` and ``span`` the number of
    ones from ``a`` to ``b``.  The product is formed before dividing.
    """
    if span <= 0:
        return base + a
    delta = (b - a) * (j - count_a)
    if span == (1 << shift):
        return base + a + (delta >> shift)
    return base + a + delta // span


@njit(cache=True)
def unwrap_offsets(a, b, ones_before_s, count_a, superblock):
    """Fix a segment whose low offsets straddle a superblock boundary.

    When ``b < a`` the two samples lie in different superblocks.  If the
    sample at ``a`` precedes superblock ``s`` it is moved one superblock
    left, otherwise ``b`` is moved one superblock right.
    """
    if b < a:
        if ones_before_s >= count_a:
            a -= superblock
        else:
            b += superblock
    return a, b


@njit(cache=True)
def predict_two_level(sb_rank, sb_bits, high, hi_shift, low, lo_shift, n1, j):
    """Return ``(p, s, l)``: unclamped prediction, superblock, low index."""
    s = high[(j - 1) >> hi_shift]
    last = len(sb_rank) - 2
    if s > last:
        s = last
    s = find_superblock(sb_rank, j, s)
    l = (j - 1) >> lo_shift
    count_a = max(1, l << lo_shift)
    count_b = min((l + 1) << lo_shift, n1)
    a, b = unwrap_offsets(np.int64(low[l]), np.int64(low[l + 1]), sb_rank[s], count_a, sb_bits)
    p = interpolate(sb_bits * s, a, b, count_a, count_b - count_a, lo_shift, j)
    return p, s, l


@njit(cache=True)
def predict_one_level(select_array, shift, n1, j):
    m = j >> shift
    count_a = max(1, m << shift)
    count_b = min((m + 1) << shift, n1)
    return interpolate(0, select_array[m], select_array[m + 1], count_a, count_b - count_a, shift, j)
