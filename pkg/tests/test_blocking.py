"""Soundex codes, block building and cross-party intersection."""

import pytest

from cbflink.blocking import build_blocks, intersect_blocks, soundex
from cbflink.encoding import Record

# Standard reference codes, including the h/w collapse cases.
REFERENCE_CODES = {
    "peter": "P360",
    "pete": "P300",
    "robert": "R163",
    "rupert": "R163",
    "ashcraft": "A261",
    "ashcroft": "A261",
    "tymczak": "T522",
    "pfister": "P236",
    "honeyman": "H555",
    "jackson": "J250",
    "washington": "W252",
    "lee": "L000",
    "gutierrez": "G362",
}


class TestSoundex:
    @pytest.mark.parametrize("name,code", sorted(REFERENCE_CODES.items()))
    def test_reference_table(self, name, code):
        assert soundex(name) == code

    def test_case_insensitive(self):
        assert soundex("PeTeR") == soundex("peter")

    def test_empty_and_nonalpha_use_reserved_code(self):
        assert soundex("") == "Z000"
        assert soundex("12345") == "Z000"
        assert soundex("!!") == "Z000"

    def test_digits_inside_names_are_ignored(self):
        assert soundex("pe2ter") == soundex("peter")


class TestBuildBlocks:
    def records(self):
        return [
            Record("a", ("peter", "miller")),
            Record("b", ("pete", "miller")),
            Record("c", ("paula", "смит")),
        ]

    def test_different_codes_split_blocks(self):
        blocks = build_blocks(self.records(), blocking_attrs=(0,))
        assert blocks["P360"] == [0]
        assert blocks["P300"] == [1]

    def test_every_record_in_exactly_one_block(self):
        blocks = build_blocks(self.records(), blocking_attrs=(0,))
        placed = sorted(i for ids in blocks.values() for i in ids)
        assert placed == [0, 1, 2]

    def test_two_attribute_keys_concatenate(self):
        blocks = build_blocks(self.records(), blocking_attrs=(0, 1))
        assert "P360M460" in blocks

    def test_nonlatin_value_lands_in_reserved_block(self):
        blocks = build_blocks(self.records(), blocking_attrs=(1,))
        assert 2 in blocks["Z000"]

    def test_empty_dataset(self):
        assert build_blocks([], blocking_attrs=(0,)) == {}

    def test_bad_attr_index(self):
        with pytest.raises(ValueError):
            build_blocks(self.records(), blocking_attrs=(9,))


class TestIntersectBlocks:
    def test_common_key_survives(self):
        maps = [{"A": [0], "B": [1]}, {"B": [0], "C": [1]}, {"B": [0]}]
        assert intersect_blocks(maps) == {"B"}

    def test_disjoint_maps_yield_empty(self):
        assert intersect_blocks([{"A": [0]}, {"B": [0]}]) == set()

    def test_identical_maps_keep_all(self):
        maps = [{"A": [0], "B": [1]}] * 3
        assert intersect_blocks(maps) == {"A", "B"}

    def test_needs_two_maps(self):
        with pytest.raises(ValueError):
            intersect_blocks([{"A": [0]}])

    def test_same_blocking_values_share_a_block_across_parties(self):
        parties = [
            [Record("x", ("peter", "miller"))],
            [Record("y", ("PETER ", "Miller"))],
        ]
        maps = [build_blocks(db, (0, 1)) for db in parties]
        assert len(intersect_blocks(maps)) == 1
