"""Binary file formats.  All integers are little-endian.

Bit vector (``SPBV``)::

    magic "SPBV" | u32 version = 1 | u64 n | ceil(n / 64) x u64 words

Index files start with a 4-byte magic, u32 version = 1 and a run of u64
scalars, followed by arrays, each written as ``u64 count`` then ``count``
elements:

* ``SPIX`` (SPIDER): n, n1, sigma_h, sigma_l; rank_array (u64),
  modified bit vector words (u64), high_select (u64), low_select (u16).
* ``NIIX`` (non-interleaved): n, n1, sigma; l1_rank (u64), l2_rank (u16),
  select_array (u64), then the padded bit vector words (u64).
"""
from __future__ import annotations

import struct

import numpy as np

from .bits import BitVector, words_for
from .errors import FormatError
from .index import ONE_LEVEL, TWO_LEVEL, KernelState
from .layout import FLAT, GEOMETRY, INTERLEAVED, padded_length
from .ni_spider import NiSpiderIndex
from .spider import SpiderIndex

VERSION = 1
_HEAD = struct.Struct("<4sI")
_U64 = struct.Struct("<Q")


def _read_exact(f, size):
    data = f.read(size)
    if len(data) != size:
        raise FormatError("unexpected end of file")
    return data


def _read_header(f, magic):
    got, version = _HEAD.unpack(_read_exact(f, _HEAD.size))
    if got != magic:
        raise FormatError(f"bad magic {got!r}, expected {magic!r}")
    if version != VERSION:
        raise FormatError(f"unsupported version {version}")


def _read_u64(f):
    return _U64.unpack(_read_exact(f, 8))[0]


def _write_array(f, arr, dtype):
    arr = np.ascontiguousarray(arr).astype(dtype, copy=False)
    f.write(_U64.pack(arr.size))
    f.write(arr.tobytes())


def _read_array(f, dtype):
    count = _read_u64(f)
    dt = np.dtype(dtype)
    return np.frombuffer(_read_exact(f, count * dt.itemsize), dtype=dt)


def save_bitvector(bv: BitVector, path) -> None:
    with open(path, "wb") as f:
        f.write(_HEAD.pack(b"SPBV", VERSION))
        f.write(_U64.pack(bv.n))
        f.write(bv.words.astype("<u8").tobytes())


def load_bitvector(path) -> BitVector:
    with open(path, "rb") as f:
        _read_header(f, b"SPBV")
        n = _read_u64(f)
        nw = words_for(n)
        words = np.frombuffer(_read_exact(f, 8 * nw), dtype="<u8").astype(np.uint64)
        if f.read(1):
            raise FormatError("trailing bytes after the last word")
    try:
        return BitVector(words, n)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def save_index(idx, path) -> None:
    st = idx.state
    with open(path, "wb") as f:
        if type(idx) is SpiderIndex:
            f.write(_HEAD.pack(b"SPIX", VERSION))
            for v in (st.n, st.n1, idx.sigma_h, idx.sigma_l):
                f.write(_U64.pack(v))
            _write_array(f, st.sb_rank, "<u8")
            _write_array(f, st.blocks.reshape(-1), "<u8")
            _write_array(f, st.hi, "<u8")
            _write_array(f, st.lo, "<u2")
        elif type(idx) is NiSpiderIndex:
            f.write(_HEAD.pack(b"NIIX", VERSION))
            for v in (st.n, st.n1, idx.sigma):
                f.write(_U64.pack(v))
            _write_array(f, st.sb_rank, "<u8")
            _write_array(f, st.l2, "<u2")
            _write_array(f, st.hi, "<u8")
            _write_array(f, st.blocks.reshape(-1), "<u8")
        else:
            raise TypeError(f"{type(idx).__name__} has no serialized form")


def load_index(path):
    """Load a ``SPIX`` or ``NIIX`` file, dispatching on the magic."""
    with open(path, "rb") as f:
        magic = f.read(4)
    if magic == b"SPIX":
        return _load_spider(path)
    if magic == b"NIIX":
        return _load_ni(path)
    raise FormatError(f"unknown index magic {magic!r}")


def _check(cond, what):
    if not cond:
        raise FormatError(f"inconsistent index file: {what}")


def _pow2_shift(x, what):
    _check(x >= 1 and x & (x - 1) == 0, f"{what} is not a power of two")
    return x.bit_length() - 1


def _load_spider(path):
    with open(path, "rb") as f:
        _read_header(f, b"SPIX")
        n, n1, sigma_h, sigma_l = (_read_u64(f) for _ in range(4))
        rank_array = _read_array(f, "<u8").astype(np.int64)
        modified = _read_array(f, "<u8").astype(np.uint64)
        high = _read_array(f, "<u8").astype(np.int64)
        low = _read_array(f, "<u2").astype(np.uint16)
        _check(not f.read(1), "trailing bytes")
    payload, skip, sb_bits, _ = GEOMETRY[INTERLEAVED]
    _check(n >= 1, "empty vector")
    n_pad = padded_length(n, INTERLEAVED)
    n_blocks = n_pad // payload
    _check(modified.size == 8 * n_blocks, "modified bit vector length")
    _check(rank_array.size == n_pad // sb_bits + 1 and rank_array[-1] == n1, "rank array")
    if n1:
        _check(high.size == (n1 - 1) // sigma_h + 2, "high select length")
        _check(low.size == n1 // sigma_l + 2, "low select length")
    st = KernelState(
        INTERLEAVED, TWO_LEVEL, n, n1, n_pad, n_blocks, payload, skip, sb_bits,
        rank_array, modified.reshape(n_blocks, 8), np.zeros(0, np.uint16),
        high, _pow2_shift(sigma_h, "sigma_h"), low, _pow2_shift(sigma_l, "sigma_l"),
    )
    return SpiderIndex(st, {"sigma_h": sigma_h, "sigma_l": sigma_l})


def _load_ni(path):
    with open(path, "rb") as f:
        _read_header(f, b"NIIX")
        n, n1, sigma = (_read_u64(f) for _ in range(3))
        l1 = _read_array(f, "<u8").astype(np.int64)
        l2 = _read_array(f, "<u2").astype(np.uint16)
        sel = _read_array(f, "<u8").astype(np.int64)
        words = _read_array(f, "<u8").astype(np.uint64)
        _check(not f.read(1), "trailing bytes")
    payload, skip, sb_bits, _ = GEOMETRY[FLAT]
    _check(n >= 1, "empty vector")
    n_pad = padded_length(n, FLAT)
    n_blocks = n_pad // payload
    _check(words.size == n_pad // 64, "bit vector length")
    _check(l2.size == n_blocks, "second-level rank length")
    _check(l1.size == n_pad // sb_bits + 1 and l1[-1] == n1, "rank array")
    if n1:
        _check(sel.size == n1 // sigma + 2, "select array length")
    st = KernelState(
        FLAT, ONE_LEVEL, n, n1, n_pad, n_blocks, payload, skip, sb_bits,
        l1, words.reshape(n_blocks, 8), l2, sel, _pow2_shift(sigma, "sigma"),
        np.zeros(0, np.uint16), 0,
    )
    return NiSpiderIndex(st, {"sigma": sigma})

