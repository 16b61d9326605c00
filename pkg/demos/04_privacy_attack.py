"""Frequency linkage attack: plain filters vs counting filters.

An adversary holding a global database (worst case: the attacked
database itself) re-identifies a plain Bloom filter by its exact bit
pattern.  A counting Bloom filter only pins down the positions where
all contributors agree, and always stands for several records at once,
so its disclosure risk is strictly lower - the privacy argument for
summing before anything leaves the parties' hands.
"""

from cbflink import BfParams, BloomFilter, ClkEncoder, bf_attack, cbf_attack, sum_to_cbf
from cbflink.datagen import corrupt_value, sample_base_population

import random

base = sample_base_population(1000, seed=21, skew=0.0)
encoder = ClkEncoder(BfParams())
filters = [BloomFilter(row) for row in encoder.encode_all(base)]

# Plain filters, worst case G == D: every distinct record is unique.
plain = bf_attack(filters, filters)
print("plain filters, G == D:")
print(f"  mean disclosure risk:     {plain.dr_mean:.3f}")
print(f"  marketer disclosure risk: {plain.dr_marketer:.3f}")

# The linkage unit, however, only ever sees counting filters.
for p in (3, 5, 10):
    observed = [(sum_to_cbf([f] * p), p) for f in filters]
    counting = cbf_attack(observed, filters)
    print(f"counting filters of {p} contributors:")
    print(f"  mean disclosure risk:     {counting.dr_mean:.3f}  (cap 1/{p})")
    print(f"  marketer disclosure risk: {counting.dr_marketer:.3f}")

# Dirty data lowers re-identification further: corrupted spellings stop
# matching the global patterns at all.
rng = random.Random(4)
dirty = []
for record in base:
    values = list(record.qid_values)
    if rng.random() < 0.4:
        attr = rng.randrange(len(values))
        values[attr] = corrupt_value(values[attr], "substitute", rng)
    dirty.append(record.__class__(record.entity_id, tuple(values)))
dirty_filters = [BloomFilter(row) for row in ClkEncoder(BfParams()).encode_all(dirty)]
attacked = bf_attack(dirty_filters, filters)
print("plain filters after 40% single-character corruption:")
print(f"  mean disclosure risk:     {attacked.dr_mean:.3f}")
print(f"  unmatched records:        {attacked.unmatched}")
