"""Secure summation of Bloom-filter vectors: BSS, SSS and HSS.

All three schemes move a masked accumulator around a ring of parties;
each hop adds one party's bit vector.  Only the designated receiver (the
linkage unit or the ring initiator) can turn the final accumulator back
into a plain counting Bloom filter:

* BSS adds a random start vector that the receiver later subtracts.
* SSS additionally has every party add a private salt vector derived from
  an integer key it registers with the receiver only, so colluding
  parties cannot difference a victim's contribution out.
* HSS carries Paillier ciphertexts; hops multiply in encrypted bits and
  only the private-key holder can decrypt.

Unmasking is range-checked: any count outside [0, contributors] signals a
protocol violation, a wrong mask, or a withheld salt.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from hashlib import blake2b
from typing import Sequence

import numpy as np

from .encoding import BloomFilter, CountingBloomFilter
from .paillier import PaillierKeypair, PaillierPublicKey

BSS = "BSS"
SSS = "SSS"
HSS = "HSS"
SCHEMES = (BSS, SSS, HSS)

# Masks and salts are drawn per position from [0, 2^16): wide enough to
# hide partial sums for any realistic party count, small enough for the
# 2-byte transport accounting.
MASK_RANGE = 1 << 16

# Per-position wire widths under nominal accounting: short integers for
# plain masked sums, long integers for encrypted values.
NOMINAL_BYTES_PLAIN = 2
NOMINAL_BYTES_ENCRYPTED = 4


def _derived_rng(seed: int, tag: object) -> np.random.Generator:
    digest = blake2b(
        repr(tag).encode("utf-8"), digest_size=16, key=seed.to_bytes(8, "big", signed=False)
    ).digest()
    return np.random.default_rng(int.from_bytes(digest, "big"))


@dataclass(frozen=True)
class RandomMaskVector:
    """Start vector injected by the receiver for one candidate-set lineage.

    Reproducible from (seed, set id) so determinism checks can re-derive
    it; it is never sent to anyone but the first party in the chain.
    """

    values: np.ndarray
    owner: str = "LU"

    def __post_init__(self) -> None:
        values = np.ascontiguousarray(self.values, dtype=np.int64)
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @classmethod
    def generate(cls, seed: int, set_id: object, length: int, owner: str = "LU") -> "RandomMaskVector":
        rng = _derived_rng(seed, ("mask", set_id))
        return cls(rng.integers(0, MASK_RANGE, size=length, dtype=np.int64), owner)


@dataclass(frozen=True)
class SaltKey:
    """A party's private salting key, registered with the receiver only."""

    key: int
    registered_with: str = "LU"

    def vector(self, length: int) -> np.ndarray:
        """Deterministic full-length salt vector for this key.

        Key 0 is the degenerate all-zero salt (SSS then behaves as BSS).
        A scalar salt would be removable by differencing positions, hence
        the per-position expansion.
        """
        if self.key == 0:
            return np.zeros(length, dtype=np.int64)
        rng = _derived_rng(self.key & (2**64 - 1), ("salt", self.key))
        return rng.integers(0, MASK_RANGE, size=length, dtype=np.int64)

    @classmethod
    def generate(cls, rng: random.Random, registered_with: str = "LU") -> "SaltKey":
        return cls(rng.randrange(1, 2**63), registered_with)


@dataclass(frozen=True)
class MaskedVector:
    """In-transit accumulator: plain integers (BSS/SSS) or ciphertexts (HSS)."""

    values: np.ndarray | tuple[int, ...]
    scheme: str
    hop_count: int = 0

    def __post_init__(self) -> None:
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if self.scheme == HSS:
            object.__setattr__(self, "values", tuple(self.values))
        else:
            values = np.ascontiguousarray(self.values, dtype=np.int64)
            values.flags.writeable = False
            object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.values)


def _check_scheme(vector: MaskedVector, scheme: str, op: str) -> None:
    if vector.scheme != scheme:
        raise ValueError(f"{op} applied to a {vector.scheme} vector")


def _check_length(vector: MaskedVector, bf: BloomFilter) -> None:
    if len(vector) != len(bf):
        raise ValueError(
            "length mismatch: accumulator %d vs Bloom filter %d"
            % (len(vector), len(bf))
        )


def bss_start(mask: RandomMaskVector) -> MaskedVector:
    """Fresh BSS accumulator holding just the mask."""
    return MaskedVector(mask.values.copy(), BSS, hop_count=0)


def bss_add(acc: MaskedVector, bf: BloomFilter) -> MaskedVector:
    """One BSS hop: position-wise add one party's bits."""
    _check_scheme(acc, BSS, "bss_add")
    _check_length(acc, bf)
    return MaskedVector(acc.values + bf.bits, BSS, acc.hop_count + 1)


def _range_checked(counts: np.ndarray, contributors: int) -> CountingBloomFilter:
    if counts.size and (counts.min() < 0 or counts.max() > contributors):
        raise ValueError(
            "unmasked counts outside [0, %d]: protocol violation, wrong mask "
            "or missing salt" % contributors
        )
    return CountingBloomFilter(counts, contributors)


def bss_unmask(final: MaskedVector, mask: RandomMaskVector, contributors: int) -> CountingBloomFilter:
    """Subtract the round-start mask, yielding the plain CBF."""
    _check_scheme(final, BSS, "bss_unmask")
    if len(final) != len(mask.values):
        raise ValueError("mask length does not match accumulator length")
    return _range_checked(final.values - mask.values, contributors)


def sss_add(acc: MaskedVector, bf: BloomFilter, salt: SaltKey) -> MaskedVector:
    """One SSS hop: add the party's bits plus its private salt vector."""
    _check_scheme(acc, SSS, "sss_add")
    _check_length(acc, bf)
    salted = acc.values + bf.bits + salt.vector(len(bf))
    return MaskedVector(salted, SSS, acc.hop_count + 1)


def sss_start(mask: RandomMaskVector) -> MaskedVector:
    """Fresh SSS accumulator holding just the mask."""
    return MaskedVector(mask.values.copy(), SSS, hop_count=0)


def sss_unmask(
    final: MaskedVector,
    mask: RandomMaskVector,
    salts: Sequence[SaltKey],
    contributors: int,
) -> CountingBloomFilter:
    """Subtract the mask and every contributing party's salt vector."""
    _check_scheme(final, SSS, "sss_unmask")
    length = len(final)
    if length != len(mask.values):
        raise ValueError("mask length does not match accumulator length")
    counts = final.values - mask.values
    for salt in salts:
        counts = counts - salt.vector(length)
    return _range_checked(counts, contributors)


def hss_start(public: PaillierPublicKey, length: int, rng: random.Random) -> MaskedVector:
    """Fresh HSS accumulator: a vector of encryptions of zero."""
    return MaskedVector(
        [public.encrypt(0, rng) for _ in range(length)], HSS, hop_count=0
    )


def hss_add(
    acc: MaskedVector, bf: BloomFilter, public: PaillierPublicKey, rng: random.Random
) -> MaskedVector:
    """One HSS hop: multiply in fresh encryptions of the party's bits."""
    _check_scheme(acc, HSS, "hss_add")
    _check_length(acc, bf)
    values = [
        public.add(c, public.encrypt(int(bit), rng))
        for c, bit in zip(acc.values, bf.bits)
    ]
    return MaskedVector(values, HSS, acc.hop_count + 1)


def hss_unmask(final: MaskedVector, keypair: PaillierKeypair, contributors: int) -> CountingBloomFilter:
    """Decrypt every position with the private key; range-check as usual."""
    _check_scheme(final, HSS, "hss_unmask")
    counts = np.fromiter(
        (keypair.decrypt(c) for c in final.values), dtype=np.int64, count=len(final)
    )
    return _range_checked(counts, contributors)


def plain_value_width(mode: str) -> int:
    """Per-position wire width in bytes for BSS/SSS under ``mode``."""
    if mode == "nominal":
        return NOMINAL_BYTES_PLAIN
    # Masked sums can exceed 2^16 (mask + bits + salts), so an honest
    # fixed-width transport needs 4 bytes.
    return 4


def encrypted_value_width(mode: str, public: PaillierPublicKey | None = None) -> int:
    """Per-position wire width in bytes for HSS under ``mode``."""
    if mode == "nominal":
        return NOMINAL_BYTES_ENCRYPTED
    if public is None:
        raise ValueError("actual accounting for HSS needs the public key")
    return (public.nsquare.bit_length() + 7) // 8


def serialized_vector_nbytes(
    vector_length: int,
    scheme: str,
    mode: str = "nominal",
    public: PaillierPublicKey | None = None,
) -> int:
    """Value bytes of one serialized MaskedVector (header excluded)."""
    if scheme in (BSS, SSS):
        return vector_length * plain_value_width(mode)
    if scheme == HSS:
        return vector_length * encrypted_value_width(mode, public)
    raise ValueError(f"unknown scheme {scheme!r}")
