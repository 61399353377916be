"""Reproducible bit vectors: Bernoulli random and character-class mapped text.

Random vectors use the PCG64 generator (O'Neill 2014, numpy's
``numpy.random.PCG64``) seeded through ``SeedSequence(seed)``.  Bit ``i`` is
1 iff the ``i``-th raw 64-bit draw is below ``floor(density * 2**64)``.
Only the raw stream is used, which numpy keeps stable across versions and
platforms.
"""
from __future__ import annotations

import numpy as np

from .bits import BitVector, _pack
from .errors import EmptyInputError
from .serialize import load_bitvector, save_bitvector  # noqa: F401  (re-exported)

_CHUNK_BITS = 1 << 22


def gen_random(n: int, density: float, seed: int = 0) -> BitVector:
    if n < 1:
        raise EmptyInputError("n must be at least 1")
    density = float(density)
    if not 0.0 <= density <= 1.0:
        raise ValueError(f"density must be in [0, 1], got {density}")
    if density == 1.0:
        return BitVector.ones(n)
    threshold = np.uint64(int(density * 2.0**64))
    gen = np.random.PCG64(seed)
    words = np.empty(-(-n // 64), dtype=np.uint64)
    for start in range(0, n, _CHUNK_BITS):
        count = min(_CHUNK_BITS, n - start)
        bits = gen.random_raw(count) < threshold
        packed = _pack(bits.view(np.uint8))
        words[start // 64 : start // 64 + len(packed)] = packed
    return BitVector(words, n)


class CharClassMap:
    """256-entry byte -> bit table."""

    def __init__(self, table):
        table = np.asarray(table, dtype=np.uint8)
        if table.shape != (256,) or table.max(initial=0) > 1:
            raise ValueError("a character class map is 256 entries of 0/1")
        self.table = table

    @classmethod
    def from_ones(cls, chars: str) -> "CharClassMap":
        table = np.zeros(256, dtype=np.uint8)
        table[list(chars.encode("latin-1"))] = 1
        return cls(table)

    @classmethod
    def from_zeros(cls, chars: str) -> "CharClassMap":
        table = np.ones(256, dtype=np.uint8)
        table[list(chars.encode("latin-1"))] = 0
        return cls(table)

    def __getitem__(self, byte: int) -> int:
        return int(self.table[byte])


def _span(a: str, b: str) -> str:
    return "".join(chr(c) for c in range(ord(a), ord(b) + 1))


PRESETS = {
    "wikipedia": CharClassMap.from_ones(_span("a", "n") + _span("A", "N")),
    "protein": CharClassMap.from_ones("L"),
    "protein-even": CharClassMap.from_zeros(_span("A", "L")),
}


def preset(name: str) -> CharClassMap:
    try:
        return PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None


def text_to_bits(data: bytes, cmap: CharClassMap | str) -> BitVector:
    if isinstance(cmap, str):
        cmap = preset(cmap)
    raw = np.frombuffer(bytes(data), dtype=np.uint8)
    if raw.size == 0:
        raise EmptyInputError("empty text")
    return BitVector(_pack(cmap.table[raw]), raw.size)


# Background amino acid frequencies (percent), UniProtKB/Swiss-Prot composition.
AMINO_FREQ = {
    "A": 8.25, "R": 5.53, "N": 4.06, "D": 5.45, "C": 1.37, "Q": 3.93, "E": 6.75,
    "G": 7.07, "H": 2.27, "I": 5.96, "L": 9.66, "K": 5.84, "M": 2.42, "F": 3.86,
    "P": 4.70, "S": 6.56, "T": 5.34, "W": 1.08, "Y": 2.92, "V": 6.87,
}


def synthetic_protein(nbytes: int, seed: int = 0) -> bytes:
    """Newline separated pseudo protein sequences.

    Each sequence draws its own residue composition from a Dirichlet around
    the background frequencies, so local density drifts the way real
    sequence collections do.  Lengths are log-normal around 300 residues.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    letters = np.frombuffer("".join(AMINO_FREQ).encode(), dtype=np.uint8)
    base = np.array(list(AMINO_FREQ.values()))
    base = base / base.sum()
    out = np.empty(nbytes, dtype=np.uint8)
    pos = 0
    while pos < nbytes:
        length = int(np.clip(rng.lognormal(np.log(300), 0.6), 20, 5000))
        comp = rng.dirichlet(base * 150)
        seq = letters[rng.choice(len(letters), size=length, p=comp)]
        take = min(length, nbytes - pos)
        out[pos : pos + take] = seq[:take]
        pos += take
        if pos < nbytes:
            out[pos] = ord("\n")
            pos += 1
    return out.tobytes()


_WORDS = (
    "the of and in to a was is for on as with by he that at from his it an were "
    "are which this also be had first one has their its new after but who not they "
    "have her she two been other when there all during into school time may years more "
    "most only over city some world would where later up such used many can state about "
    "national out known university united then made these team united american film "
    "season between being both under three since war government history north south "
    "county district however album number area several game village early john river "
    "party group began following played series born while population released including "
    "members called public four life became station through century company second "
    "family work church based major will played local club league around local each"
).split()


def synthetic_text(nbytes: int, seed: int = 0) -> bytes:
    """English-like prose: Zipf-weighted common words, sentences and paragraphs."""
    rng = np.random.Generator(np.random.PCG64(seed))
    vocab = list(dict.fromkeys(_WORDS))
    weights = 1.0 / np.arange(1, len(vocab) + 1)
    weights /= weights.sum()
    parts = []
    size = 0
    while size < nbytes:
        words = [vocab[k] for k in rng.choice(len(vocab), size=int(rng.integers(6, 25)), p=weights)]
        if rng.random() < 0.3:
            words.insert(int(rng.integers(0, len(words))), str(int(rng.integers(1800, 2024))))
        sentence = " ".join(words)
        sentence = sentence[0].upper() + sentence[1:] + (". " if rng.random() < 0.9 else ".\n\n")
        parts.append(sentence)
        size += len(sentence)
    return "".join(parts).encode("ascii")[:nbytes]


def synthetic_corpus(preset_name: str, nbytes: int, seed: int = 0) -> bytes:
    if preset_name == "wikipedia":
        return synthetic_text(nbytes, seed)
    if preset_name in ("protein", "protein-even"):
        return synthetic_protein(nbytes, seed)
    raise ValueError(f"unknown preset {preset_name!r}")
