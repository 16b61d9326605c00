"""All-to-all vs ring pipelines: cost, pruning, and collusion surface.

Runs the same five-party linkage under the three communication
patterns, then compares observed candidate counts with the closed-form
worst cases and prints the collusion-combination argument for grouping
parties into rings.
"""

from cbflink import (
    BfParams,
    LinkageConfig,
    LinkageRun,
    collusion_combinations,
    count_candidates,
    group_rings,
)
from cbflink.datagen import CorruptionSpec, generate, sample_base_population

base = sample_base_population(2000, seed=3, skew=0.0)
data = generate(base, p=5, n=200, overlap=0.5, spec=CorruptionSpec(seed=1), seed=9)

params = BfParams(l=500, k=20, q=2)
for pattern, r_m in (("NAI", 2), ("SEQ", 2), ("RBR", 3)):
    config = LinkageConfig(
        params=params,
        pattern=pattern,
        scheme="SSS",
        r_m=r_m,
        blocking_attrs=(0, 1),
        seed=4,
    )
    run = LinkageRun(data.parties, config)
    matches = run.execute()
    true = sum(
        1
        for m in matches
        if len({data.parties[p][r].entity_id for p, r in m.member_records}) == 1
    )
    print(
        f"{pattern:>3} (r_m={r_m}): {len(matches)} matches ({true} true), "
        f"{run.observed_candidates()} candidate formations, "
        f"{run.network.ledger.total_bytes:,} bytes, "
        f"{run.timings['matching']:.2f}s matching"
    )

# Ring plans for ten parties: the remainder joins the largest ring.
print("\nring plans for ten equal parties:")
for r_m in (2, 3, 4, 5):
    plan = group_rings([(i, 1000) for i in range(10)], r_m)
    print(f"  r_m={r_m}: sizes {[len(r) for r in plan.rings]}")

# Closed-form worst cases on idealized equal blocks (n=16, b=2).
print("\nworst-case candidate counts, n=16 records in b=2 blocks:")
for p in (3, 4):
    print(f"  p={p}: all-to-all {count_candidates('NAI', 16, 2, p):,}", end="")
    if p % 2 == 0:
        print(f", sequential rings of 2: {count_candidates('SEQ', 16, 2, p, 2):,}")
    else:
        print()

# Grouping also shrinks who can collude with whom.
print("\ncollusion combinations with nine parties:")
print("  all-to-all:", collusion_combinations("NAI", 9))
print("  rings of 3:", collusion_combinations("SEQ", 9, 3))
