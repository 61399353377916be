"""Rank metadata layouts and their single-scan builders.

Three layouts share one query engine (see ``index.py``):

* interleaved: 63488-bit superblocks, each 128 basic blocks of 496 payload
  bits stored as 512-bit blocks whose first 16 bits hold the local rank;
* flat: 65536-bit superblocks and a separate 16-bit local rank per 512-bit
  block, over the untouched (zero padded) bit vector;
* lines: one 64-bit absolute rank per 512-bit line (the strawman).
"""
import numpy as np
from numba import njit

from .bits import BLOCK_BITS, BLOCK_WORDS, popcount, read_word_at

INTERLEAVED = 0
FLAT = 1
LINES = 2

PAYLOAD_BITS = BLOCK_BITS - 16          # 496
BLOCKS_PER_SUPERBLOCK = 128
BLOCK_SHIFT = 7
SPIDER_SUPERBLOCK = PAYLOAD_BITS * BLOCKS_PER_SUPERBLOCK   # 63488
FLAT_SUPERBLOCK = BLOCK_BITS * BLOCKS_PER_SUPERBLOCK       # 65536
LOCAL_RANK_MASK = np.uint64(0xFFFF)

GEOMETRY = {
    # layout: (payload bits per block, skip, superblock bits, block shift)
    INTERLEAVED: (PAYLOAD_BITS, 16, SPIDER_SUPERBLOCK, BLOCK_SHIFT),
    FLAT: (BLOCK_BITS, 0, FLAT_SUPERBLOCK, BLOCK_SHIFT),
    LINES: (BLOCK_BITS, 0, BLOCK_BITS, 0),
}


def padded_length(n: int, layout: int) -> int:
    unit = GEOMETRY[layout][2]
    return max(1, -(-n // unit)) * unit


@njit(cache=True)
def build_interleaved(words, n_blocks):
    """Rank array (with trailing n1 sentinel) and the modified bit vector.

    ``words`` must cover ``n_blocks * 496`` bits plus one spare zero word.
    """
    modified = np.zeros((n_blocks, BLOCK_WORDS), dtype=np.uint64)
    rank_array = np.empty(n_blocks // BLOCKS_PER_SUPERBLOCK + 1, dtype=np.int64)
    total = 0
    local = 0
    for b in range(n_blocks):
        if b & (BLOCKS_PER_SUPERBLOCK - 1) == 0:
            rank_array[b >> BLOCK_SHIFT] = total
            local = 0
        start = PAYLOAD_BITS * b
        first = read_word_at(words, start)
        modified[b, 0] = (first << np.uint64(16)) | np.uint64(local)
        ones = popcount(first & np.uint64(0xFFFFFFFFFFFF))
        for t in range(1, BLOCK_WORDS):
            w = read_word_at(words, start + 64 * t - 16)
            modified[b, t] = w
            ones += popcount(w)
        local += ones
        total += ones
    rank_array[-1] = total
    return rank_array, modified


@njit(cache=True)
def build_flat(words, n_blocks):
    """First-level (with n1 sentinel) and second-level rank arrays."""
    l1 = np.empty(n_blocks // BLOCKS_PER_SUPERBLOCK + 1, dtype=np.int64)
    l2 = np.empty(n_blocks, dtype=np.uint16)
    total = 0
    local = 0
    for b in range(n_blocks):
        if b & (BLOCKS_PER_SUPERBLOCK - 1) == 0:
            l1[b >> BLOCK_SHIFT] = total
            local = 0
        l2[b] = local
        ones = 0
        for t in range(BLOCK_WORDS * b, BLOCK_WORDS * b + BLOCK_WORDS):
            ones += popcount(words[t])
        local += ones
        total += ones
    l1[-1] = total
    return l1, l2


@njit(cache=True)
def build_lines(words, n_blocks):
    ranks = np.empty(n_blocks + 1, dtype=np.int64)
    total = 0
    for b in range(n_blocks):
        ranks[b] = total
        for t in range(BLOCK_WORDS * b, BLOCK_WORDS * b + BLOCK_WORDS):
            total += popcount(words[t])
    ranks[-1] = total
    return ranks


@njit(cache=True)
def extract_payload(modified, n_words):
    """Reassemble the original words from a modified bit vector."""
    out = np.zeros(n_words + 2, dtype=np.uint64)
    for b in range(modified.shape[0]):
        for t in range(BLOCK_WORDS):
            w = modified[b, t]
            lo = PAYLOAD_BITS * b + 64 * t - 16
            if t == 0:
                w = w >> np.uint64(16)
                lo += 16
            wi = lo >> 6
            off = lo & 63
            if wi >= n_words:
                continue
            out[wi] |= w << np.uint64(off)
            if off and wi + 1 < n_words:
                out[wi + 1] |= w >> np.uint64(64 - off)
    return out[:n_words]
