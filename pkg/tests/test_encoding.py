"""Encoding, Dice similarity and the CBF equivalence."""

import math
from hashlib import blake2b

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cbflink.encoding import (
    BfParams,
    BloomFilter,
    ClkEncoder,
    CountingBloomFilter,
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


def bf(bits) -> BloomFilter:
    return BloomFilter(np.asarray(bits, dtype=np.uint8))


def reference_hash64(gram: str, seed: int) -> int:
    # Independent re-derivation of the base hash used by the encoder.
    digest = blake2b(gram.encode(), digest_size=8, key=seed.to_bytes(8, "big")).digest()
    return int.from_bytes(digest, "big")


class TestExtractQgrams:
    def test_peter_bigrams(self):
        assert extract_qgrams("peter", 2) == ["pe", "et", "te", "er"]

    def test_pete_bigrams(self):
        assert extract_qgrams("pete", 2) == ["pe", "et", "te"]

    def test_empty_input(self):
        assert extract_qgrams("", 2) == []

    def test_value_shorter_than_q(self):
        assert extract_qgrams("a", 3) == []

    def test_padding_wraps_both_ends(self):
        grams = extract_qgrams("ab", 2, pad=True)
        assert grams == ["#a", "ab", "b#"]

    def test_q1_is_characters(self):
        assert extract_qgrams("abc", 1) == ["a", "b", "c"]

    def test_invalid_q(self):
        with pytest.raises(ValueError):
            extract_qgrams("abc", 0)


class TestEncodeClk:
    def test_empty_values_give_zero_filter(self):
        params = BfParams(l=32, k=3, q=2)
        out = encode_clk(Record("e", ("", "  ")), params)
        assert out.popcount == 0 and len(out) == 32

    def test_single_gram_positions_match_double_hash_formula(self):
        # Hand-evaluate (h_a + i*h_b) mod l for i = 1..k with a reference
        # hash oracle and require exactly those bits.
        params = BfParams(l=14, k=2, q=2, hash_seed_a=1, hash_seed_b=2)
        h_a = reference_hash64("pe", 1)
        h_b = reference_hash64("pe", 2)
        expected = {(h_a + i * h_b) % 14 for i in (1, 2)}
        out = encode_clk(Record("e", ("pe",)), params)
        assert set(np.flatnonzero(out.bits)) == expected

    def test_popcount_bounded_by_grams_times_k(self):
        params = BfParams(l=14, k=2, q=2)
        for value in ("peter", "pete"):
            record = Record("e", (value,))
            g = len(set(extract_qgrams(value, 2)))
            out = encode_clk(record, params)
            assert 0 < out.popcount <= min(14, g * 2)

    def test_deterministic_across_calls(self):
        params = BfParams(l=100, k=5, q=2)
        record = Record("e", ("Peter ", "MILLER"))
        assert encode_clk(record, params) == encode_clk(record, params)

    def test_normalization_folds_case_and_space(self):
        params = BfParams(l=100, k=5, q=2)
        a = encode_clk(Record("x", ("  PETER",)), params)
        b = encode_clk(Record("y", ("peter",)), params)
        assert a == b

    def test_batch_encoder_matches_single(self):
        params = BfParams(l=64, k=4, q=2)
        records = [Record(str(i), (v,)) for i, v in enumerate(("peter", "pete", "maria"))]
        matrix = ClkEncoder(params).encode_all(records)
        for row, record in zip(matrix, records):
            assert np.array_equal(row, encode_clk(record, params).bits)

    def test_record_needs_a_value(self):
        with pytest.raises(ValueError):
            encode_clk(Record("e", ()), BfParams(l=8, k=1, q=2))


class TestDiceBf:
    def test_identical_filters(self):
        a = bf([1, 0, 1, 1])
        assert dice_bf([a, bf([1, 0, 1, 1])]) == 1.0

    def test_disjoint_filters(self):
        assert dice_bf([bf([1, 1, 0, 0]), bf([0, 0, 1, 1])]) == 0.0

    def test_hand_counted_example(self):
        # z = 2 common bits, x1 = 3, x2 = 2 -> 2*2 / 5
        assert dice_bf([bf([1, 1, 0, 1]), bf([1, 0, 0, 1])]) == 0.8

    def test_all_empty_is_zero(self):
        assert dice_bf([bf([0, 0]), bf([0, 0])]) == 0.0

    def test_needs_two_filters(self):
        with pytest.raises(ValueError):
            dice_bf([bf([1, 0])])

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="incompatible"):
            dice_bf([bf([1, 0]), bf([1, 0, 1])])

    def test_permutation_invariant(self):
        filters = [bf([1, 1, 0, 1]), bf([1, 0, 0, 1]), bf([0, 1, 1, 1])]
        expected = dice_bf(filters)
        assert dice_bf(filters[::-1]) == expected
        assert dice_bf([filters[1], filters[2], filters[0]]) == expected


class TestSumToCbf:
    def test_position_wise_addition(self):
        out = sum_to_cbf([bf([1, 0, 1]), bf([1, 1, 0])])
        assert list(out.counts) == [2, 1, 1] and out.contributors == 2

    def test_single_filter_identity(self):
        out = sum_to_cbf([bf([1, 0, 1])])
        assert list(out.counts) == [1, 0, 1] and out.contributors == 1

    def test_uniform_all_ones(self):
        out = sum_to_cbf([bf([1] * 4)] * 3)
        assert list(out.counts) == [3, 3, 3, 3]

    def test_order_does_not_matter(self):
        filters = [bf([1, 0, 1]), bf([1, 1, 0]), bf([0, 0, 1])]
        assert sum_to_cbf(filters) == sum_to_cbf(filters[::-1])

    def test_associative_via_partial_sums(self):
        filters = [bf([1, 0, 1]), bf([1, 1, 0]), bf([0, 0, 1])]
        left = sum_to_cbf(filters[:2]).counts + filters[2].bits
        assert np.array_equal(left, sum_to_cbf(filters).counts)


class TestDiceCbf:
    def test_direct_evaluation(self):
        out = dice_cbf(CountingBloomFilter(np.array([2, 0, 2, 1]), contributors=2))
        assert out == 2 * 2 / 5

    def test_identical_filters_reach_one(self):
        cbf = sum_to_cbf([bf([1, 0, 1, 1])] * 4)
        assert dice_cbf(cbf) == 1.0

    def test_rejects_masked_counts(self):
        with pytest.raises(ValueError, match="masked or corrupted"):
            dice_cbf(CountingBloomFilter(np.array([5, 0]), contributors=2))

    def test_needs_two_contributors(self):
        with pytest.raises(ValueError):
            dice_cbf(CountingBloomFilter(np.array([1, 0]), contributors=1))

    def test_zero_denominator(self):
        assert dice_cbf(CountingBloomFilter(np.zeros(4, dtype=np.int64), 3)) == 0.0


@st.composite
def bloom_filter_sets(draw):
    l = draw(st.sampled_from([8, 14, 33, 64]))
    p = draw(st.integers(min_value=2, max_value=6))
    rows = draw(
        st.lists(
            st.lists(st.integers(0, 1), min_size=l, max_size=l),
            min_size=p,
            max_size=p,
        )
    )
    return [bf(row) for row in rows]


class TestCbfEquivalence:
    @given(bloom_filter_sets())
    @settings(max_examples=300, deadline=None)
    def test_dice_from_cbf_equals_dice_from_bfs(self, filters):
        # Bit-exact, not approximate: both routes evaluate the same
        # integer numerator and denominator.
        assert dice_cbf(sum_to_cbf(filters)) == dice_bf(filters)

    def test_equivalence_on_encoded_records(self):
        params = BfParams(l=500, k=20, q=2)
        filters = [
            encode_clk(Record(str(i), (v, "smith")), params)
            for i, v in enumerate(("peter", "pete", "petra"))
        ]
        assert dice_cbf(sum_to_cbf(filters)) == dice_bf(filters)


class TestParameterFormulas:
    def test_optimal_k_matches_rounded_formula(self):
        assert optimal_k(500, 17) == round(500 / 17 * math.log(2)) == 20
        assert optimal_k(1000, 50) == 14

    def test_optimal_k_clamps_to_one(self):
        assert optimal_k(10, 100) == 1

    def test_false_positive_rate_values(self):
        assert false_positive_rate(10, 10) == pytest.approx(2 ** -math.log(2))
        # direct evaluation of (1/2^ln2)^(l/g) at l/g = 10
        assert false_positive_rate(500, 50) == pytest.approx(0.0081925, abs=1e-6)

    def test_false_positive_rate_monotone_in_length(self):
        rates = [false_positive_rate(l, 25) for l in (25, 50, 100, 200, 400)]
        assert all(a > b for a, b in zip(rates, rates[1:]))

    def test_memory_bits_examples(self):
        assert memory_bits(1000, 5) == (3000, 5000)
        assert memory_bits(1000, 10) == (4000, 10000)
        assert memory_bits(1, 2) == (1, 2)

    def test_memory_bits_single_contributor(self):
        assert memory_bits(64, 1) == (64, 64)


class TestInvariantsAndValidation:
    def test_params_validate(self):
        with pytest.raises(ValueError):
            BfParams(l=0, k=1, q=1)
        with pytest.raises(ValueError):
            BfParams(l=1, k=1, q=1, hash_seed_a=2**64)

    def test_bloom_filter_rejects_non_binary(self):
        with pytest.raises(ValueError):
            bf([0, 2, 1])

    def test_filters_are_immutable(self):
        filt = bf([1, 0, 1])
        with pytest.raises(ValueError):
            filt.bits[0] = 0

    @given(st.text(max_size=12), st.integers(1, 4))
    @settings(max_examples=100, deadline=None)
    def test_popcount_bound_property(self, value, q):
        params = BfParams(l=64, k=3, q=q)
        record = Record("e", (value,))
        grams = set(extract_qgrams(value.strip().lower(), q))
        out = encode_clk(record, params)
        assert out.popcount <= min(64, len(grams) * 3)
