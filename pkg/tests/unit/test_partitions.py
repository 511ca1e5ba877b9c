"""
Unit tests for bipartition enumeration and factor sets
"""
import pytest

from gmelab.core.exceptions import ValidationError
from gmelab.models.domain import Bipartition, SubsystemLayout
from gmelab.services.partitions import (
    check_cut,
    cut_dimensions,
    cut_factors,
    enumerate_bipartitions,
    split_for_factors,
)
from gmelab.services.states import copies, star_pen


class TestEnumeration:

    @pytest.mark.parametrize("n, count", [(2, 1), (3, 3), (4, 7), (5, 15)])
    def test_count(self, n, count):
        assert len(enumerate_bipartitions(n)) == count == 2 ** (n - 1) - 1

    def test_three_parties(self):
        assert [b.label for b in enumerate_bipartitions(3)] == ["1|23", "12|3", "13|2"]

    def test_every_cut_contains_party_one(self):
        assert all(b.m[0] == 1 for b in enumerate_bipartitions(5))

    def test_rejects_single_party(self):
        with pytest.raises(ValidationError):
            enumerate_bipartitions(1)


class TestBipartition:
    """Canonical form and cut syntax"""

    def test_from_parties_complements(self):
        assert Bipartition.from_parties([2, 3], 3) == Bipartition((1,), 3)

    def test_parse_either_side(self):
        assert Bipartition.parse("23|1", 3).m == (1,)
        assert Bipartition.parse("13|2", 3).label == "13|2"

    @pytest.mark.parametrize("text", ["1|2", "12", "1|2x", "11|23"])
    def test_parse_rejects(self, text):
        with pytest.raises(ValidationError):
            Bipartition.parse(text, 3)

    def test_non_canonical_rejected(self):
        with pytest.raises(ValidationError):
            Bipartition((2,), 3)

    def test_full_set_rejected(self):
        with pytest.raises(ValidationError):
            Bipartition((1, 2, 3), 3)


class TestCutFactors:
    """Factor-level index sets"""

    def test_hub_cut_on_star(self):
        layout = star_pen(3, 0.4).layout
        assert cut_factors(Bipartition((1,), 3), layout) == ([0, 1], [2, 3])

    def test_leaf_cut_on_star(self):
        layout = star_pen(3, 0.4).layout
        left, right = cut_factors(Bipartition((1, 2), 3), layout)
        assert right == [3]
        assert layout.factors[3].party == 3

    def test_two_copies(self):
        layout = copies(star_pen(3, 0.4), 2).layout
        left, right = cut_factors(Bipartition((1,), 3), layout)
        assert len(left) == 4 and len(right) == 4

    def test_dimensions(self):
        layout = star_pen(3, 0.4).layout
        assert cut_dimensions(Bipartition((1, 3), 3), layout) == (8, 2)

    def test_layout_outside_cut(self):
        with pytest.raises(ValidationError):
            cut_factors(Bipartition((1,), 2), SubsystemLayout.qubits(3))

    def test_empty_side(self):
        layout = SubsystemLayout.from_dimensions([2, 2])
        with pytest.raises(ValidationError):
            check_cut(Bipartition((1,), 3), layout)

    def test_split_for_subset(self):
        layout = star_pen(3, 0.4).layout
        # factors 1 (hub slot 3) and 3 (party 3) across 12|3
        assert split_for_factors(Bipartition((1, 2), 3), layout, [1, 3]) == ([0], [1])
