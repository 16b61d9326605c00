"""Synthetic multi-party datasets with controlled overlap and corruption.

A base population is sampled from bundled name/address frequency tables
(or supplied by the caller, e.g. from a real voter-roll extract).  A
chosen fraction of entities is copied to every party; the rest are
unique to one party.  Within the overlap, a chosen fraction of entities
is handed out in corrupted form to a random nonempty proper subset of
the parties, simulating the hospital whose copy of a patient's details
carries typos while the others hold the correct values.  Entity ids
survive corruption untouched, so ground truth stays exact.
"""

from __future__ import annotations

import csv
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

from . import namedata
from .encoding import Record

CSV_COLUMNS = ("entity_id", "first_name", "last_name", "city", "zipcode")

ALPHABET = "abcdefghijklmnopqrstuvwxyz"

# Substring rewrites mimicking optical character recognition confusions
# and phonetic spelling variation.  Deliberately small; callers may pass
# their own tables to corrupt_value / CorruptionSpec.
OCR_TABLE: Mapping[str, str] = {
    "m": "rn",
    "rn": "m",
    "w": "vv",
    "cl": "d",
    "d": "cl",
    "o": "0",
    "0": "o",
    "l": "1",
    "1": "l",
    "s": "5",
    "5": "s",
    "b": "8",
    "8": "b",
    "g": "9",
    "q": "g",
}

PHONETIC_TABLE: Mapping[str, str] = {
    "ph": "f",
    "f": "ph",
    "ck": "k",
    "c": "k",
    "k": "c",
    "z": "s",
    "x": "ks",
    "sh": "ch",
    "ch": "sh",
    "ee": "ea",
    "ea": "ee",
    "ou": "ow",
    "y": "i",
    "i": "y",
    "th": "t",
}

CORRUPTION_OPS = ("insert", "delete", "substitute", "transpose", "ocr_map", "phonetic_map")


def corrupt_value(
    value: str,
    op: str,
    rng: random.Random,
    ocr_table: Mapping[str, str] = OCR_TABLE,
    phonetic_table: Mapping[str, str] = PHONETIC_TABLE,
) -> str:
    """Apply exactly one modification of the given kind at an rng-chosen spot.

    Inputs too short for the operation (empty string for delete, one
    character for transpose, no applicable table entry) come back
    unchanged; callers detect that by comparison.
    """
    if op == "insert":
        pos = rng.randrange(len(value) + 1)
        return value[:pos] + rng.choice(ALPHABET) + value[pos:]
    if op == "delete":
        if not value:
            return value
        pos = rng.randrange(len(value))
        return value[:pos] + value[pos + 1 :]
    if op == "substitute":
        if not value:
            return value
        pos = rng.randrange(len(value))
        replacement = rng.choice(ALPHABET)
        while replacement == value[pos]:
            replacement = rng.choice(ALPHABET)
        return value[:pos] + replacement + value[pos + 1 :]
    if op == "transpose":
        if len(value) < 2:
            return value
        pos = rng.randrange(len(value) - 1)
        return value[:pos] + value[pos + 1] + value[pos] + value[pos + 2 :]
    if op in ("ocr_map", "phonetic_map"):
        table = ocr_table if op == "ocr_map" else phonetic_table
        hits = [
            (start, src)
            for src in table
            for start in range(len(value) - len(src) + 1)
            if value[start : start + len(src)] == src
        ]
        if not hits:
            return value
        start, src = hits[rng.randrange(len(hits))]
        return value[:start] + table[src] + value[start + len(src) :]
    raise ValueError(f"unknown corruption op {op!r}")


@dataclass(frozen=True)
class CorruptionSpec:
    """How much of the overlap to corrupt and with which edit mix."""

    corruption_rate: float = 0.0
    op_weights: Mapping[str, float] = field(
        default_factory=lambda: {op: 1 / len(CORRUPTION_OPS) for op in CORRUPTION_OPS}
    )
    modifications_per_record: int = 2
    seed: int = 0
    ocr_table: Mapping[str, str] = field(default_factory=lambda: OCR_TABLE)
    phonetic_table: Mapping[str, str] = field(default_factory=lambda: PHONETIC_TABLE)

    def __post_init__(self) -> None:
        if not 0.0 <= self.corruption_rate <= 1.0:
            raise ValueError("corruption_rate must be in [0, 1]")
        if self.modifications_per_record < 1:
            raise ValueError("modifications_per_record must be >= 1")
        unknown = set(self.op_weights) - set(CORRUPTION_OPS)
        if unknown:
            raise ValueError(f"unknown corruption ops: {sorted(unknown)}")
        total = sum(self.op_weights.values())
        if abs(total - 1.0) > 1e-9:
            raise ValueError("op weights must sum to 1")


@dataclass
class MultiPartyDataset:
    """Per-party record lists plus the exact construction ground truth."""

    parties: list[list[Record]]
    ground_truth: set[str]
    corrupted_entities: set[str]
    flags: dict[str, int] = field(default_factory=dict)


def sample_base_population(
    size: int, seed: int, skew: float = 1.0, distinct: bool = True
) -> list[Record]:
    """Sample entities from the bundled frequency tables.

    ``skew`` exponentiates the table weights: 1.0 keeps the realistic
    head-heavy distribution, 0.0 samples uniformly (handy when block
    sizes must stay small).  With ``distinct`` (the default) no two
    entities share a (first name, last name) pair.  Together with the
    phonetically distinct tables this keeps the sample free of
    confusable cross-entity pairs, matching the sparsity of a few
    thousand records drawn from a roll of millions.
    """
    rng = random.Random(seed)
    first_w = [w**skew for _, w in namedata.GIVEN_NAMES]
    last_w = [w**skew for _, w in namedata.SURNAMES]
    city_w = [w**skew for *_, w in namedata.CITIES]
    name_space = len(namedata.GIVEN_NAMES) * len(namedata.SURNAMES)
    if distinct and size > name_space * 2 // 3:
        raise ValueError(
            f"cannot draw {size} distinct name pairs from a space of {name_space}"
        )

    records: list[Record] = []
    seen: set[tuple[str, str]] = set()
    while len(records) < size:
        batch = size - len(records)
        firsts = rng.choices(namedata.GIVEN_NAMES, weights=first_w, k=batch)
        lasts = rng.choices(namedata.SURNAMES, weights=last_w, k=batch)
        cities = rng.choices(namedata.CITIES, weights=city_w, k=batch)
        for (first, _), (last, _), (city, zipcode, _) in zip(firsts, lasts, cities):
            if distinct:
                combo = (first, last)
                if combo in seen:
                    continue
                seen.add(combo)
            # city gives the zip prefix, the household the last two digits
            zipcode = f"{zipcode[:3]}{rng.randrange(100):02d}"
            records.append(
                Record(f"e{len(records):07d}", (first, last, city, zipcode))
            )
    return records


def _corrupt_record(record: Record, spec: CorruptionSpec, rng: random.Random) -> tuple[Record, int]:
    ops = list(spec.op_weights)
    weights = [spec.op_weights[o] for o in ops]
    values = list(record.qid_values)
    unchanged = 0
    for _ in range(spec.modifications_per_record):
        attr = rng.randrange(len(values))
        op = rng.choices(ops, weights=weights, k=1)[0]
        out = corrupt_value(values[attr], op, rng, spec.ocr_table, spec.phonetic_table)
        if out == values[attr]:
            unchanged += 1
        values[attr] = out
    return Record(record.entity_id, tuple(values)), unchanged


def generate(
    base_population: Sequence[Record],
    p: int,
    n: int,
    overlap: float,
    spec: CorruptionSpec,
    seed: int,
) -> MultiPartyDataset:
    """Build ``p`` party databases of ``n`` records each.

    ``overlap * n`` entities (rounded) appear at every party; the rest
    are unique to one party.  Of the overlapping entities, a
    ``corruption_rate`` fraction is corrupted at a uniformly random
    nonempty proper subset of the parties while the other parties keep
    the original values.  Fixed seeds reproduce the dataset exactly.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    if not 0.0 <= overlap <= 1.0:
        raise ValueError("overlap must be in [0, 1]")
    n_overlap = round(overlap * n)
    n_unique = n - n_overlap
    needed = n_overlap + p * n_unique
    if len(base_population) < needed:
        raise ValueError(
            f"base population of {len(base_population)} records cannot supply "
            f"{needed} distinct entities"
        )
    rng = random.Random(seed)
    corrupt_rng = random.Random(spec.seed)

    picked = rng.sample(range(len(base_population)), needed)
    shared = [base_population[i] for i in picked[:n_overlap]]
    cursor = n_overlap

    parties: list[list[Record]] = [list(shared) for _ in range(p)]
    for party in parties:
        for i in range(n_unique):
            party.append(base_population[picked[cursor + i]])
        cursor += n_unique

    n_corrupt = round(spec.corruption_rate * n_overlap)
    corrupted = rng.sample(range(n_overlap), n_corrupt) if n_corrupt else []
    corrupted_entities = set()
    no_op_count = 0
    for shared_idx in corrupted:
        entity = shared[shared_idx]
        corrupted_entities.add(entity.entity_id)
        if p == 1:
            subset = [0]
        else:
            size = corrupt_rng.randrange(1, p)  # nonempty proper subset
            subset = corrupt_rng.sample(range(p), size)
        for party_idx in subset:
            mutated, unchanged = _corrupt_record(entity, spec, corrupt_rng)
            no_op_count += unchanged
            parties[party_idx][shared_idx] = mutated

    for party in parties:
        rng.shuffle(party)

    return MultiPartyDataset(
        parties=parties,
        ground_truth={r.entity_id for r in shared},
        corrupted_entities=corrupted_entities,
        flags={"no_op_corruptions": no_op_count},
    )


def write_party_csv(records: Sequence[Record], path: str | Path) -> None:
    """One party's database as UTF-8 CSV with LF line endings."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for record in records:
            writer.writerow((record.entity_id, *record.qid_values))


def write_dataset(dataset: MultiPartyDataset, out_dir: str | Path, stem: str = "party") -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for i, records in enumerate(dataset.parties, start=1):
        path = out / f"{stem}_{i}.csv"
        write_party_csv(records, path)
        paths.append(path)
    return paths
