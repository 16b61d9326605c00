"""Linkage quality and disclosure-risk evaluation.

Quality is scored against construction ground truth: a classified record
set is a true positive exactly when all its members carry one entity id.
Privacy is scored with a frequency linkage attack against a global
database (worst case: the global database is the masked one itself).
A Bloom filter is re-identified among the global filters with identical
bit patterns; a counting Bloom filter only constrains the positions
where its count is 0 (all contributors had 0) or equal to the
contributor count (all had 1), and always stands for at least
``contributors`` originals, so its per-record suspicion is capped at
``1 / contributors``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .encoding import BloomFilter, CountingBloomFilter, Record


@dataclass(frozen=True)
class ConfusionCounts:
    true_positives: int
    false_positives: int
    false_negatives: int

    def __post_init__(self) -> None:
        if min(self.true_positives, self.false_positives, self.false_negatives) < 0:
            raise ValueError("confusion counts must be non-negative")


def f_measure(counts: ConfusionCounts) -> float:
    """Harmonic mean of precision and recall over classified record sets."""
    tp, fp, fn = counts.true_positives, counts.false_positives, counts.false_negatives
    if tp + fp + fn == 0:
        raise ValueError("nothing classified and nothing true: F-measure undefined")
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    if precision + recall == 0.0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def confusion_from_matches(
    matches: Iterable,
    databases: Sequence[Sequence[Record]],
) -> ConfusionCounts:
    """Score match results against entity ids.

    A match is true when all member records share one entity id.  The
    recall denominator is the set of entities present at every party;
    such an entity counts as found when at least one true match names it.
    """
    eligible: set[str] | None = None
    for db in databases:
        ids = {r.entity_id for r in db}
        eligible = ids if eligible is None else (eligible & ids)
    eligible = eligible or set()

    tp = fp = 0
    found: set[str] = set()
    for match in matches:
        ids = {databases[party][rec].entity_id for party, rec in match.member_records}
        if len(ids) == 1:
            tp += 1
            found |= ids
        else:
            fp += 1
    fn = len(eligible - found)
    return ConfusionCounts(tp, fp, fn)


@dataclass(frozen=True)
class AttackResult:
    """Per-record probabilities of suspicion plus the two DR aggregates."""

    per_record: tuple[float, ...]
    dr_mean: float
    dr_marketer: float
    unmatched: int = 0

    @classmethod
    def from_probabilities(cls, probabilities: Sequence[float], unmatched: int = 0) -> "AttackResult":
        if not probabilities:
            raise ValueError("attack over an empty database")
        pr = tuple(float(x) for x in probabilities)
        return cls(
            per_record=pr,
            dr_mean=sum(pr) / len(pr),
            dr_marketer=sum(1 for x in pr if x == 1.0) / len(pr),
            unmatched=unmatched,
        )


def bf_attack(
    masked_db: Sequence[BloomFilter], global_db: Sequence[BloomFilter]
) -> AttackResult:
    """Frequency linkage attack on plain Bloom filters.

    Each masked filter is matched to the global filters with an identical
    bit pattern; with ``n_g`` such candidates the record's probability of
    suspicion is ``1 / n_g``.  A record with no global match (possible
    only when the global database differs from the masked one) gets
    probability 0 and is counted in ``unmatched``.
    """
    if masked_db and global_db and len(masked_db[0]) != len(global_db[0]):
        raise ValueError("masked and global Bloom filters use different lengths")
    frequencies = Counter(bf.bits.tobytes() for bf in global_db)
    probabilities = []
    unmatched = 0
    for bf in masked_db:
        n_g = frequencies.get(bf.bits.tobytes(), 0)
        if n_g == 0:
            unmatched += 1
            probabilities.append(0.0)
        else:
            probabilities.append(1.0 / n_g)
    return AttackResult.from_probabilities(probabilities, unmatched)


def cbf_attack(
    observed_cbfs: Sequence[tuple[CountingBloomFilter, int]],
    global_db: Sequence[BloomFilter],
) -> AttackResult:
    """Frequency linkage attack on unmasked counting Bloom filters.

    A global filter is consistent with a CBF when it is 0 wherever the
    count is 0 and 1 wherever the count equals the contributor count;
    intermediate counts constrain nothing.  Each of the ``x`` underlying
    records gets probability ``1 / max(n_g, x)``: even a unique
    consistency match leaves ``x`` originals behind one CBF.
    """
    if not global_db:
        raise ValueError("attack needs a non-empty global database")
    matrix = np.stack([bf.bits for bf in global_db]).astype(bool)
    probabilities: list[float] = []
    unmatched = 0
    for cbf, contributors in observed_cbfs:
        if contributors < 2:
            raise ValueError("CBF attack needs contributors >= 2")
        counts = cbf.counts
        if counts.min(initial=0) < 0 or counts.max(initial=0) > contributors:
            raise ValueError("masked CBF handed to the attack")
        if len(counts) != matrix.shape[1]:
            raise ValueError("CBF length does not match the global filters")
        zero_ok = ~matrix[:, counts == 0].any(axis=1)
        full_ok = matrix[:, counts == contributors].all(axis=1)
        n_g = int((zero_ok & full_ok).sum())
        if n_g == 0:
            unmatched += 1
            probabilities.extend([0.0] * contributors)
        else:
            probabilities.extend([1.0 / max(n_g, contributors)] * contributors)
    return AttackResult.from_probabilities(probabilities, unmatched)
