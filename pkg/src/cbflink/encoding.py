"""Bloom-filter encoding of records and Dice similarity.

A record's quasi-identifier values are split into character q-grams and
hash-mapped into one compound bit vector per record (CLK encoding).  Sets
of such bit vectors can be compared with the Dice coefficient directly,
or summed position-wise into a counting Bloom filter whose Dice value is
provably identical to the multi-filter one.  Both routes are exposed here
so that the equivalence can be exercised as a property.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from hashlib import blake2b
from typing import Sequence

import numpy as np

PAD_CHAR = "#"


def normalize_value(value: str) -> str:
    """Lowercase and trim an attribute value before gram extraction."""
    return value.strip().lower()


@dataclass(frozen=True)
class BfParams:
    """Agreed Bloom-filter parameters shared by all linkage participants.

    Positions are derived by double hashing: two seeded 64-bit base hashes
    ``h_a`` and ``h_b`` of each gram give positions
    ``(h_a + i * h_b) mod l`` for ``i = 1..k``.  Equal parameters produce
    bit-identical encodings for equal inputs on any platform.
    """

    l: int = 500
    k: int = 20
    q: int = 2
    hash_seed_a: int = 0x5bd1e995
    hash_seed_b: int = 0xc6a4a793
    pad_grams: bool = False

    def __post_init__(self) -> None:
        if self.l < 1 or self.k < 1 or self.q < 1:
            raise ValueError("l, k and q must all be >= 1")
        for seed in (self.hash_seed_a, self.hash_seed_b):
            if not 0 <= seed < 2**64:
                raise ValueError("hash seeds must be unsigned 64-bit integers")


@dataclass(frozen=True)
class Record:
    """One party-local row: an entity id plus quasi-identifier values.

    ``entity_id`` exists only so linkage output can be scored against
    ground truth; it never takes part in hashing, blocking or encoding.
    """

    entity_id: str
    qid_values: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "qid_values", tuple(self.qid_values))


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class BloomFilter:
    """Fixed-length bit vector holding the hash-mapped grams of one record."""

    bits: np.ndarray

    def __post_init__(self) -> None:
        bits = np.ascontiguousarray(self.bits, dtype=np.uint8)
        if bits.ndim != 1:
            raise ValueError("bits must be one-dimensional")
        if not np.all((bits == 0) | (bits == 1)):
            raise ValueError("bits must contain only 0 and 1")
        object.__setattr__(self, "bits", _freeze(bits))

    def __len__(self) -> int:
        return self.bits.shape[0]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BloomFilter):
            return NotImplemented
        return np.array_equal(self.bits, other.bits)

    def __hash__(self) -> int:
        return hash(self.bits.tobytes())

    @property
    def popcount(self) -> int:
        return int(self.bits.sum())


@dataclass(frozen=True, eq=False)
class CountingBloomFilter:
    """Position-wise integer sum of a set of equal-length Bloom filters."""

    counts: np.ndarray
    contributors: int

    def __post_init__(self) -> None:
        counts = np.ascontiguousarray(self.counts, dtype=np.int64)
        if counts.ndim != 1:
            raise ValueError("counts must be one-dimensional")
        if self.contributors < 0:
            raise ValueError("contributors must be non-negative")
        object.__setattr__(self, "counts", _freeze(counts))

    def __len__(self) -> int:
        return self.counts.shape[0]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CountingBloomFilter):
            return NotImplemented
        return self.contributors == other.contributors and np.array_equal(
            self.counts, other.counts
        )


def extract_qgrams(value: str, q: int, pad: bool = False) -> list[str]:
    """Return all length-``q`` substrings of ``value`` in order.

    With ``pad`` set, ``q - 1`` sentinel characters are attached to both
    ends first so that every original character appears in ``q`` grams.
    Total function: any string (including the empty one) has a result.
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    if pad:
        value = PAD_CHAR * (q - 1) + value + PAD_CHAR * (q - 1)
    return [value[i : i + q] for i in range(len(value) - q + 1)]


def _hash64(gram: str, seed: int) -> int:
    digest = blake2b(
        gram.encode("utf-8"), digest_size=8, key=seed.to_bytes(8, "big")
    ).digest()
    return int.from_bytes(digest, "big")


def gram_positions(gram: str, params: BfParams) -> list[int]:
    """Bit positions a single gram sets, via seeded double hashing."""
    h_a = _hash64(gram, params.hash_seed_a)
    h_b = _hash64(gram, params.hash_seed_b)
    return [(h_a + i * h_b) % params.l for i in range(1, params.k + 1)]


def record_grams(record: Record, params: BfParams) -> set[str]:
    """Distinct q-grams over all normalized QID values of a record."""
    grams: set[str] = set()
    for value in record.qid_values:
        grams.update(extract_qgrams(normalize_value(value), params.q, params.pad_grams))
    return grams


def encode_clk(record: Record, params: BfParams) -> BloomFilter:
    """Encode all QID values of a record into one compound Bloom filter.

    Every distinct gram of every value sets ``k`` double-hashed positions,
    so ``popcount <= min(l, g * k)`` for ``g`` distinct grams.  The result
    is fully determined by ``(record, params)``.
    """
    if not record.qid_values:
        raise ValueError("record must carry at least one QID value")
    bits = np.zeros(params.l, dtype=np.uint8)
    for gram in record_grams(record, params):
        bits[gram_positions(gram, params)] = 1
    return BloomFilter(bits)


class ClkEncoder:
    """Batch CLK encoder with a gram-position cache.

    Real databases repeat grams heavily, so caching the double-hash
    positions per distinct gram dominates encoding speed.  Produces the
    exact same bits as :func:`encode_clk`.
    """

    def __init__(self, params: BfParams):
        self.params = params
        self._cache: dict[str, list[int]] = {}

    def _positions(self, gram: str) -> list[int]:
        pos = self._cache.get(gram)
        if pos is None:
            pos = gram_positions(gram, self.params)
            self._cache[gram] = pos
        return pos

    def encode(self, record: Record) -> BloomFilter:
        bits = np.zeros(self.params.l, dtype=np.uint8)
        for gram in record_grams(record, self.params):
            bits[self._positions(gram)] = 1
        return BloomFilter(bits)

    def encode_all(self, records: Sequence[Record]) -> np.ndarray:
        """Encode records into an ``(n, l)`` uint8 matrix, one row per record."""
        out = np.zeros((len(records), self.params.l), dtype=np.uint8)
        for row, record in enumerate(records):
            for gram in record_grams(record, self.params):
                out[row, self._positions(gram)] = 1
        return out


def _check_equal_lengths(bfs: Sequence[BloomFilter]) -> int:
    length = len(bfs[0])
    for bf in bfs[1:]:
        if len(bf) != length:
            raise ValueError(
                "Bloom filters of different lengths (%d vs %d): incompatible "
                "encodings" % (length, len(bf))
            )
    return length


def dice_bf(bfs: Sequence[BloomFilter]) -> float:
    """Dice coefficient of two or more Bloom filters.

    ``p * z / sum(x_i)`` where ``z`` counts positions set in every filter
    and ``x_i`` is the popcount of filter ``i``.  Returns 0.0 when all
    filters are empty (an empty record carries no match evidence).
    """
    if len(bfs) < 2:
        raise ValueError("Dice similarity needs at least two Bloom filters")
    _check_equal_lengths(bfs)
    stack = np.stack([bf.bits for bf in bfs])
    z = int(stack.all(axis=0).sum())
    total_ones = int(stack.sum())
    if total_ones == 0:
        return 0.0
    return len(bfs) * z / total_ones


def sum_to_cbf(bfs: Sequence[BloomFilter]) -> CountingBloomFilter:
    """Position-wise sum of Bloom filters into one counting Bloom filter."""
    if not bfs:
        raise ValueError("need at least one Bloom filter")
    _check_equal_lengths(bfs)
    counts = np.zeros(len(bfs[0]), dtype=np.int64)
    for bf in bfs:
        counts += bf.bits
    return CountingBloomFilter(counts, contributors=len(bfs))


def dice_cbf(cbf: CountingBloomFilter) -> float:
    """Dice coefficient of the filters summed into ``cbf``, from ``cbf`` alone.

    ``p * |{beta : counts[beta] = p}| / sum(counts)`` with
    ``p = contributors``.  Equals :func:`dice_bf` of the underlying filter
    set exactly, since both evaluate the same integer numerator and
    denominator.
    """
    return dice_cbf_counts(cbf.counts, cbf.contributors)


def dice_cbf_counts(counts: np.ndarray, contributors: int) -> float:
    """Eq.-level Dice on a raw counts vector; see :func:`dice_cbf`."""
    if contributors < 2:
        raise ValueError("a CBF Dice value needs at least two contributors")
    if counts.min(initial=0) < 0 or counts.max(initial=0) > contributors:
        raise ValueError(
            "counts outside [0, contributors]: masked or corrupted CBF"
        )
    denominator = int(counts.sum())
    if denominator == 0:
        return 0.0
    z = int((counts == contributors).sum())
    return contributors * z / denominator


def optimal_k(l: int, g: int) -> int:
    """Number of hash functions minimizing the false-positive rate.

    ``round(l / g * ln 2)``, rounded half away from zero and clamped to 1.
    """
    if l < 1 or g < 1:
        raise ValueError("l and g must be >= 1")
    return max(1, math.floor(l / g * math.log(2) + 0.5))


def false_positive_rate(l: int, g: int) -> float:
    """Collision probability ``(1 / 2^ln2)^(l/g)`` for g grams in l bits."""
    if l < 1 or g < 1:
        raise ValueError("l and g must be >= 1")
    return (2.0 ** -math.log(2)) ** (l / g)


def memory_bits(l: int, p: int) -> tuple[int, int]:
    """Memory of one CBF vs p plain BFs, in bits: ``(l*ceil(log2 p), l*p)``."""
    if l < 1 or p < 1:
        raise ValueError("l and p must be >= 1")
    cbf_bits = l * max(1, math.ceil(math.log2(p)))
    return cbf_bits, l * p
