"""Plain bit vectors and the word/block level rank and select primitives.

Bits are stored LSB-first in 64-bit words: bit ``i`` is bit ``i % 64`` of
word ``i // 64``.  A 512-bit block is eight consecutive words; the
interleaved layout keeps a 16-bit local rank in the low bits of word 0,
which the block primitives skip via their ``skip`` argument.

``select_in_word`` has two implementations.  On x86 CPUs with BMI2 it is
compiled to ``pdep`` + ``tzcnt``; elsewhere a broadword byte-rank routine
with an in-byte lookup table is used.  Both are always importable so they
can be checked against each other.
"""
from __future__ import annotations

import numpy as np
from llvmlite import ir
import llvmlite.binding as llvm
from numba import njit, types
from numba.core import cgutils
from numba.extending import intrinsic

from .errors import InvariantError

WORD_BITS = 64
BLOCK_WORDS = 8
BLOCK_BITS = WORD_BITS * BLOCK_WORDS
SELECT_NONE = 64

_L8 = np.uint64(0x0101010101010101)
_H8 = np.uint64(0x8080808080808080)
_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)


def _host_has_bmi2() -> bool:
    try:
        features = llvm.get_host_cpu_features()
    except RuntimeError:
        return False
    return bool(features.get("bmi2", False))


HAS_BMI2 = _host_has_bmi2()


@intrinsic
def _ctpop(typingctx, x):
    sig = types.uint64(types.uint64)

    def codegen(context, builder, signature, args):
        fnty = ir.FunctionType(ir.IntType(64), [ir.IntType(64)])
        fn = cgutils.get_or_insert_function(builder.module, fnty, "llvm.ctpop.i64")
        return builder.call(fn, args)

    return sig, codegen


@intrinsic
def _cttz(typingctx, x):
    sig = types.uint64(types.uint64)

    def codegen(context, builder, signature, args):
        fnty = ir.FunctionType(ir.IntType(64), [ir.IntType(64), ir.IntType(1)])
        fn = cgutils.get_or_insert_function(builder.module, fnty, "llvm.cttz.i64")
        return builder.call(fn, [args[0], ir.Constant(ir.IntType(1), 0)])

    return sig, codegen


@intrinsic
def _pdep(typingctx, src, mask):
    sig = types.uint64(types.uint64, types.uint64)

    def codegen(context, builder, signature, args):
        fnty = ir.FunctionType(ir.IntType(64), [ir.IntType(64), ir.IntType(64)])
        fn = cgutils.get_or_insert_function(builder.module, fnty, "llvm.x86.bmi.pdep.64")
        return builder.call(fn, args)

    return sig, codegen


@njit(cache=True, inline="always")
def popcount(w):
    return np.int64(_ctpop(np.uint64(w)))


def _build_byte_select_table():
    table = np.full(256 * 8, 8, dtype=np.uint8)
    for byte in range(256):
        r = 0
        for bit in range(8):
            if byte >> bit & 1:
                table[byte * 8 + r] = bit
                r += 1
    return table


_BYTE_SELECT = _build_byte_select_table()


@njit(cache=True)
def select_in_word_portable(w, k):
    """Position of the k-th (1-based) set bit of ``w`` or 64 if there is none.

    Byte popcounts are accumulated with a multiply so that byte ``b`` of
    ``sums`` holds the count of bytes ``0..b``; comparing all eight prefix
    sums against ``k - 1`` in parallel yields the byte holding the answer.
    """
    w = np.uint64(w)
    if k < 1 or k > 64:
        return SELECT_NONE
    s = w - ((w >> np.uint64(1)) & _M1)
    s = (s & _M2) + ((s >> np.uint64(2)) & _M2)
    s = (s + (s >> np.uint64(4))) & _M4
    sums = s * _L8
    km1 = np.uint64(k - 1)
    below = (((km1 * _L8) | _H8) - sums) & _H8
    byte = np.int64(_ctpop(below))
    if byte == 8:
        return SELECT_NONE
    shift = np.uint64(8 * byte)
    before = np.int64(((sums << np.uint64(8)) >> shift) & np.uint64(0xFF))
    in_byte = np.int64((w >> shift) & np.uint64(0xFF))
    return 8 * byte + np.int64(_BYTE_SELECT[in_byte * 8 + (k - 1 - before)])


@njit(cache=True)
def select_in_word_hw(w, k):
    """``pdep``/``tzcnt`` select.  Only call when ``HAS_BMI2`` is true."""
    if k < 1 or k > 64:
        return SELECT_NONE
    return np.int64(_cttz(_pdep(np.uint64(1) << np.uint64(k - 1), np.uint64(w))))


word_select = select_in_word_hw if HAS_BMI2 else select_in_word_portable


@njit(cache=True)
def _select_batch_portable(words, ks, out):
    for q in range(len(words)):
        out[q] = select_in_word_portable(words[q], ks[q])


@njit(cache=True)
def _select_batch_hw(words, ks, out):
    for q in range(len(words)):
        out[q] = select_in_word_hw(words[q], ks[q])


def _select_path(path):
    if path == "auto":
        path = "hardware" if HAS_BMI2 else "portable"
    if path == "hardware" and not HAS_BMI2:
        raise RuntimeError("this CPU has no BMI2 support")
    if path not in ("hardware", "portable"):
        raise ValueError(f"unknown select path {path!r}")
    return path


def select_in_word(w: int, k: int, path: str = "auto") -> int:
    """Position of the k-th 1 bit of the 64-bit word ``w``; 64 if ``k`` is too large.

    ``path`` is "auto", "hardware" (pdep/tzcnt) or "portable" (broadword).
    """
    w = np.uint64(w)
    if _select_path(path) == "hardware":
        return int(select_in_word_hw(w, k))
    return int(select_in_word_portable(w, k))


def select_in_word_many(words, ks, path: str = "auto") -> np.ndarray:
    words = np.ascontiguousarray(words, dtype=np.uint64)
    ks = np.ascontiguousarray(ks, dtype=np.int64)
    out = np.empty(len(words), dtype=np.int64)
    fn = _select_batch_hw if _select_path(path) == "hardware" else _select_batch_portable
    fn(words, ks, out)
    return out


@njit(cache=True, inline="always")
def read_word_at(words, pos):
    # 64 bits starting at an arbitrary bit position; words needs one zero word of tail padding
    w = pos >> 6
    off = pos & 63
    lo = words[w]
    if off == 0:
        return lo
    return (lo >> np.uint64(off)) | (words[w + 1] << np.uint64(64 - off))


@njit(cache=True)
def rank_in_block_at(blocks, b, j, skip):
    last = j >> 6
    count = 0
    for t in range(last):
        count += popcount(blocks[b, t])
    w = blocks[b, last] << np.uint64(63 - (j & 63))
    count += popcount(w)
    if skip:
        # skip < 64 always, so the masked prefix lives in word 0 and is <= j
        count -= popcount(blocks[b, 0] & ((np.uint64(1) << np.uint64(skip)) - np.uint64(1)))
    return count


@njit(cache=True)
def select_in_block_at(blocks, b, k, skip):
    c = 0
    for t in range(BLOCK_WORDS):
        w = blocks[b, t]
        if t == 0 and skip:
            w = w & ~((np.uint64(1) << np.uint64(skip)) - np.uint64(1))
        pc = popcount(w)
        if c + pc >= k:
            return 64 * t + word_select(w, k - c)
        c += pc
    raise InvariantError("select_in_block: rank exceeds the ones in the block")


def _as_block(block):
    arr = np.ascontiguousarray(block, dtype=np.uint64)
    if arr.shape != (BLOCK_WORDS,):
        raise ValueError(f"a block is {BLOCK_WORDS} words, got shape {arr.shape}")
    return arr.reshape(1, BLOCK_WORDS)


def rank_in_block(block, j: int, skip: int = 0) -> int:
    """Ones among block bits ``[skip, j]`` (inclusive)."""
    if skip not in (0, 16) or not skip <= j < BLOCK_BITS:
        raise ValueError(f"need skip in (0, 16) and skip <= j < 512, got skip={skip}, j={j}")
    return int(rank_in_block_at(_as_block(block), 0, j, skip))


def select_in_block(block, k: int, skip: int = 0) -> int:
    """Offset from block bit 0 of the k-th 1 bit at or after ``skip``."""
    if skip not in (0, 16):
        raise ValueError(f"skip must be 0 or 16, got {skip}")
    if k < 1:
        raise InvariantError(f"select_in_block: rank must be >= 1, got {k}")
    return int(select_in_block_at(_as_block(block), 0, k, skip))


def words_for(n: int) -> int:
    return -(-n // WORD_BITS)


class BitVector:
    """Immutable uncompressed bit sequence of logical length ``n``."""

    __slots__ = ("n", "words", "_n1")

    def __init__(self, words, n: int):
        words = np.ascontiguousarray(words, dtype=np.uint64)
        if words.ndim != 1:
            raise ValueError("words must be one-dimensional")
        n = int(n)
        if n < 0:
            raise ValueError("negative length")
        if len(words) != words_for(n):
            raise ValueError(f"{n} bits need {words_for(n)} words, got {len(words)}")
        tail = n % WORD_BITS
        if tail and int(words[-1]) >> tail:
            raise ValueError("bits at positions >= n must be zero")
        words.setflags(write=False)
        self.n = n
        self.words = words
        self._n1 = None

    @classmethod
    def from_bits(cls, bits) -> "BitVector":
        """Build from an iterable/array of 0/1 values or a '0'/'1' string."""
        if isinstance(bits, str):
            bits = np.frombuffer(bits.encode("ascii"), dtype=np.uint8) - ord("0")
        arr = np.asarray(bits, dtype=np.uint8)
        if arr.size and arr.max() > 1:
            raise ValueError("bits must be 0 or 1")
        return cls(_pack(arr), arr.size)

    @classmethod
    def from_positions(cls, n: int, positions) -> "BitVector":
        pos = np.asarray(positions, dtype=np.int64)
        if pos.size and (pos.min() < 0 or pos.max() >= n):
            raise ValueError("position out of range")
        words = np.zeros(words_for(n), dtype=np.uint64)
        np.bitwise_or.at(words, pos >> 6, np.uint64(1) << (pos & 63).astype(np.uint64))
        return cls(words, n)

    @classmethod
    def zeros(cls, n: int) -> "BitVector":
        return cls(np.zeros(words_for(n), dtype=np.uint64), n)

    @classmethod
    def ones(cls, n: int) -> "BitVector":
        words = np.full(words_for(n), np.iinfo(np.uint64).max, dtype=np.uint64)
        if n % WORD_BITS:
            words[-1] = (1 << (n % WORD_BITS)) - 1
        return cls(words, n)

    @property
    def n1(self) -> int:
        if self._n1 is None:
            self._n1 = int(np.bitwise_count(self.words).sum(dtype=np.int64))
        return self._n1

    def __len__(self):
        return self.n

    def __getitem__(self, i: int) -> int:
        return get_bit(self, i)

    def __eq__(self, other):
        if not isinstance(other, BitVector):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.words, other.words)

    def __repr__(self):
        return f"BitVector(n={self.n}, n1={self.n1})"

    def to_bits(self) -> np.ndarray:
        raw = np.unpackbits(self.words.astype("<u8").view(np.uint8), bitorder="little")
        return raw[: self.n]

    def padded_words(self, n_pad: int) -> np.ndarray:
        """Copy of the words zero-extended to ``n_pad`` bits plus one spare word."""
        out = np.zeros(n_pad // WORD_BITS + 1, dtype=np.uint64)
        out[: len(self.words)] = self.words
        return out


def _pack(bits: np.ndarray) -> np.ndarray:
    nw = words_for(bits.size)
    buf = np.zeros(nw * 8, dtype=np.uint8)
    packed = np.packbits(bits, bitorder="little")
    buf[: packed.size] = packed
    return buf.view("<u8").astype(np.uint64)


def get_bit(bv: BitVector, i: int) -> int:
    if not 0 <= i < bv.n:
        raise IndexError(f"bit index {i} out of range for length {bv.n}")
    return int(bv.words[i >> 6]) >> (i & 63) & 1
