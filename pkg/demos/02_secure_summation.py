"""The three secure-summation schemes on one candidate set.

Shows how a masked accumulator travels a chain of parties, what each
scheme reveals in transit, and why every variant hands the receiver the
exact same counting Bloom filter: a random mask that is subtracted at
the end (BSS), extra per-party salt vectors that defeat collusion
(SSS), and Paillier ciphertexts that nobody without the private key can
open (HSS).
"""

import random

from cbflink import (
    BfParams,
    Record,
    RandomMaskVector,
    SaltKey,
    bss_add,
    bss_start,
    bss_unmask,
    encode_clk,
    hss_add,
    hss_start,
    hss_unmask,
    paillier_keygen,
    sss_add,
    sss_start,
    sss_unmask,
    sum_to_cbf,
)

params = BfParams(l=12, k=2, q=2)
records = [Record(str(i), (name,)) for i, name in enumerate(["peter", "peter", "petra"])]
filters = [encode_clk(r, params) for r in records]
expected = sum_to_cbf(filters)
print("plain position-wise sum:", expected.counts)

# --- basic scheme: one random start vector hides every partial sum ----
mask = RandomMaskVector.generate(seed=7, set_id="demo", length=12)
acc = bss_start(mask)
print("\nmask injected by the receiver:  ", mask.values)
for i, f in enumerate(filters):
    acc = bss_add(acc, f)
    print(f"after party {i + 1:d} added its bits:", acc.values)
print("unmasked at the receiver:       ", bss_unmask(acc, mask, 3).counts)

# Collusion gap: parties 1 and 3 can difference their views to learn
# party 2's bits, because the mask cancels out.
view_before = bss_add(bss_start(mask), filters[0]).values
view_after = bss_add(bss_add(bss_start(mask), filters[0]), filters[1]).values
print("\ncolluding difference reveals party 2:", view_after - view_before)
print("party 2's actual bits:               ", filters[1].bits)

# --- salted scheme: each party folds in a private salt vector ---------
salts = [SaltKey.generate(random.Random(i)) for i in range(3)]
acc = sss_start(mask)
for f, s in zip(filters, salts):
    acc = sss_add(acc, f, s)
print("\nwith salts, the same difference shows noise:")
one = sss_add(sss_start(mask), filters[0], salts[0]).values
two = sss_add(sss_add(sss_start(mask), filters[0], salts[0]), filters[1], salts[1]).values
print("colluding difference:", two - one)
print("receiver with all salt keys recovers:", sss_unmask(acc, mask, salts, 3).counts)
try:
    sss_unmask(acc, mask, salts[:2], 3)
except ValueError as err:
    print("receiver missing one salt key:", err)

# --- homomorphic scheme: ciphertexts all the way -----------------------
keys = paillier_keygen(bit_length=128, seed=5)
rng = random.Random(11)
acc = hss_start(keys.public, 12, rng)
for f in filters:
    acc = hss_add(acc, f, keys.public, rng)
print("\nfirst ciphertext in transit:", str(acc.values[0])[:40], "...")
print("decrypted by the key holder:", hss_unmask(acc, keys, 3).counts)

# Re-encrypting the same bit never repeats a ciphertext.
c1 = keys.public.encrypt(1, rng)
c2 = keys.public.encrypt(1, rng)
print("two encryptions of 1 differ:", c1 != c2, "- both decrypt to", keys.decrypt(c1))
