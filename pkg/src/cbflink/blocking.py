"""Soundex-based phonetic blocking and cross-party block intersection.

Each record gets exactly one blocking key: the concatenated Soundex codes
of its blocking attributes.  Only keys present at every party survive the
intersection, and only records in surviving blocks are ever compared.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from .encoding import Record, normalize_value

# American Soundex consonant codes; vowels and y reset the run,
# h and w are transparent (same-code letters around them collapse).
_SOUNDEX_CODES = {
    **dict.fromkeys("bfpv", "1"),
    **dict.fromkeys("cgjkqsxz", "2"),
    **dict.fromkeys("dt", "3"),
    "l": "4",
    **dict.fromkeys("mn", "5"),
    "r": "6",
}

DEGENERATE_CODE = "Z000"

BlockMap = dict[str, list[int]]


def soundex(name: str) -> str:
    """Standard 4-character Soundex code of a name.

    Input with no ASCII letters (including the empty string) maps to the
    reserved code ``Z000`` so such records stay linkable instead of being
    dropped.
    """
    letters = [c for c in name.lower() if "a" <= c <= "z"]
    if not letters:
        return DEGENERATE_CODE
    first = letters[0]
    digits: list[str] = []
    prev = _SOUNDEX_CODES.get(first)
    for c in letters[1:]:
        if c in "hw":
            continue
        code = _SOUNDEX_CODES.get(c)
        if code is None:  # vowel or y: breaks a run of equal codes
            prev = None
            continue
        if code != prev:
            digits.append(code)
            prev = code
        if len(digits) == 3:
            break
    return (first.upper() + "".join(digits)).ljust(4, "0")


def block_key(record: Record, blocking_attrs: Sequence[int]) -> str:
    """Concatenated Soundex codes of the record's blocking attributes."""
    return "".join(
        soundex(normalize_value(record.qid_values[a])) for a in blocking_attrs
    )


def build_blocks(records: Sequence[Record], blocking_attrs: Sequence[int]) -> BlockMap:
    """Group record indices by blocking key; every record lands in one block."""
    for a in blocking_attrs:
        if records and not 0 <= a < len(records[0].qid_values):
            raise ValueError(f"blocking attribute index {a} out of range")
    blocks: BlockMap = {}
    for idx, record in enumerate(records):
        blocks.setdefault(block_key(record, blocking_attrs), []).append(idx)
    return blocks


def intersect_blocks(maps: Sequence[Mapping[str, Sequence[int]]]) -> set[str]:
    """Keys present in every party's block map."""
    if len(maps) < 2:
        raise ValueError("block intersection needs at least two parties")
    common = set(maps[0])
    for m in maps[1:]:
        common &= set(m)
    return common
