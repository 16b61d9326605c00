"""Record encoding and Dice similarity, two ways.

Walks through the encoding pipeline on a pair of names: q-gram
extraction, hash-mapping into bit vectors, Dice similarity computed
from the individual filters, and then the same value recovered from a
single counting Bloom filter - the identity the whole toolkit relies
on, since the counting filter is all the linkage unit ever sees.
"""

from cbflink import (
    BfParams,
    Record,
    dice_bf,
    dice_cbf,
    encode_clk,
    extract_qgrams,
    false_positive_rate,
    memory_bits,
    optimal_k,
    sum_to_cbf,
)

# Two spellings of one person's name, as different parties might hold them.
value_a, value_b = "peter", "pete"
print("bigrams of %r: %s" % (value_a, extract_qgrams(value_a, q=2)))
print("bigrams of %r: %s" % (value_b, extract_qgrams(value_b, q=2)))

# A short filter makes the bit patterns readable.
params = BfParams(l=14, k=2, q=2)
bf_a = encode_clk(Record("a", (value_a,)), params)
bf_b = encode_clk(Record("b", (value_b,)), params)
print("\nbits of %r: %s" % (value_a, bf_a.bits))
print("bits of %r: %s" % (value_b, bf_b.bits))

sim = dice_bf([bf_a, bf_b])
print("\nDice from the two filters:        %.4f" % sim)

# Summing the filters position-wise loses the individual bit patterns
# but keeps everything the Dice coefficient needs.
cbf = sum_to_cbf([bf_a, bf_b])
print("counting filter:", cbf.counts)
print("Dice from the counting filter:    %.4f" % dice_cbf(cbf))
assert dice_cbf(cbf) == sim  # exact, not approximate

# The identity holds for any number of parties.
many = [encode_clk(Record(str(i), (v,)), BfParams(l=500, k=20, q=2))
        for i, v in enumerate(["peter", "pete", "petra", "peta"])]
print("\nfour-way Dice, both routes: %.4f == %.4f" % (
    dice_bf(many), dice_cbf(sum_to_cbf(many))))

# Parameter guidance: hash count that minimizes collisions, the
# resulting false-positive rate, and the memory footprint argument for
# counting filters once several parties are involved.
print("\noptimal k for l=500, 17 grams/record:", optimal_k(500, 17))
print("false positive rate at l/g = 10: %.5f" % false_positive_rate(500, 50))
for p in (5, 10):
    cbf_bits, bf_bits = memory_bits(1000, p)
    print(f"l=1000, p={p}: counting filter {cbf_bits} bits vs {bf_bits} bits of plain filters")
