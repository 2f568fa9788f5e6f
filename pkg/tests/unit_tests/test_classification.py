import pytest

from common.errors import InvalidInputError, NotABandError
from torus_lab.classification import (
    KRONECKER_G,
    e_vanishes,
    edge_rigid,
    edge_string_band,
    g_formula,
    is_rigid,
    is_rigid_entries,
    is_strongly_reduced_band,
    mirror,
    rigid_entries,
    rigid_sequences,
    sequences,
    strongly_reduced_bands,
)
from torus_lab.farey_geometry import gvector_to_curve
from torus_lab.strings_bands import SIDES, NegativeSimple, parse_seq, simple_seq
from tests.test_data import TestGVectors


class TestRigidity:
    """Test the rigidity predicate on entry sequences."""

    @pytest.mark.parametrize(
        "entries",
        [(1,), (2,), (1, 1), (1, 2, 1), (1, 1, 2, 1, 1), (1, 2, 2, 1), (1, 2, 2, 2, 1)],
    )
    def test_rigid(self, entries: tuple[int, ...]) -> None:
        assert is_rigid_entries(entries)

    @pytest.mark.parametrize(
        "entries",
        [(1, 2), (1, 3, 1), (1, 2, 1, 1, 2, 1), (2, 1, 2)],
    )
    def test_not_rigid(self, entries: tuple[int, ...]) -> None:
        """Test non-palindromes, gaps above a+1 and a repeated low window."""
        assert not is_rigid_entries(entries)

    def test_simples_are_rigid(self) -> None:
        assert is_rigid(simple_seq(1))

    def test_bands_are_refused(self) -> None:
        with pytest.raises(InvalidInputError):
            is_rigid(parse_seq("a1:1,"))

    def test_rigid_entries_enumeration(self) -> None:
        """Test that every enumerated tuple is rigid and starts with a."""
        found = list(rigid_entries(4, 1))
        assert (1,) in found and (1, 1) in found and (1, 2, 1) in found
        assert all(e[0] == 1 and is_rigid_entries(e) for e in found)

    def test_rigid_sequences_start_with_simples(self) -> None:
        found = rigid_sequences(2, 1)
        assert found[:3] == [simple_seq(1), simple_seq(2), simple_seq(3)]
        assert len(found) == 3 + 6 * len(list(rigid_entries(2, 1)))


class TestEVanishing:
    """Test the combinatorial E(C′, C) = 0 criterion."""

    def test_rigid_strings_have_vanishing_self_extension(self) -> None:
        for text in ("a1:1", "a1:1,2,1", "b1-:2,3,2"):
            s = parse_seq(text)
            assert e_vanishes(s, s)

    def test_non_vanishing(self) -> None:
        """Test that E((α₁:1,1), (α₁:2)) does not vanish."""
        assert not e_vanishes(parse_seq("a1:2"), parse_seq("a1:1,1"))

    def test_requires_shared_side(self) -> None:
        with pytest.raises(InvalidInputError):
            e_vanishes(parse_seq("a1:1"), parse_seq("b1:1"))

    def test_refuses_bands_and_simples(self) -> None:
        with pytest.raises(InvalidInputError):
            e_vanishes(parse_seq("a1:1,"), parse_seq("a1:1"))
        with pytest.raises(InvalidInputError):
            e_vanishes(simple_seq(1), parse_seq("a1:1"))


class TestEdges:
    """Test the edge predicates between rigid strings and bands."""

    def test_simple_edges(self) -> None:
        """Test that a simple meets only strings of ones on its own side."""
        s1 = simple_seq(1)
        assert edge_rigid(s1, parse_seq("a1:1"))
        assert edge_rigid(s1, parse_seq("a1:1,1"))
        assert not edge_rigid(s1, parse_seq("a1:2"))
        assert not edge_rigid(s1, simple_seq(2))

    def test_different_sides_are_not_adjacent(self) -> None:
        assert not edge_rigid(parse_seq("a1:1"), parse_seq("b1:1"))

    def test_simple_meets_its_band_partner(self) -> None:
        assert edge_string_band(simple_seq(1), parse_seq("a1:1,"))
        assert not edge_string_band(simple_seq(1), parse_seq("b1:1,"))

    def test_kronecker_band_has_no_string_neighbours(self) -> None:
        assert not edge_string_band(parse_seq("a1:1"), parse_seq("a1:0,"))


class TestBands:
    """Test the strongly reduced band predicate."""

    def test_strongly_reduced(self) -> None:
        assert is_strongly_reduced_band(parse_seq("a1:0,"))
        assert is_strongly_reduced_band(parse_seq("a1:1,"))
        assert is_strongly_reduced_band(parse_seq("a1:1,2,"))

    def test_not_strongly_reduced(self) -> None:
        assert not is_strongly_reduced_band(parse_seq("a1:1,3,"))

    def test_proper_power_is_not_a_band(self) -> None:
        with pytest.raises(NotABandError):
            is_strongly_reduced_band(parse_seq("a1:1,1,"))

    def test_sequences_skip_proper_powers(self) -> None:
        bands = list(sequences(2, 1, band=True))
        assert len(bands) == len(SIDES)

    def test_strongly_reduced_bands_start_with_kronecker(self) -> None:
        found = strongly_reduced_bands(2, 2)
        assert [s.entries for s in found[:3]] == [(0,), (0,), (0,)]
        assert all(s.is_band for s in found)
        assert len(found) == len(set(found))


class TestGFormula:
    """Test the closed-form g-vectors."""

    @pytest.mark.parametrize("vertex, g", list(TestGVectors.SIMPLES.items()))
    def test_simples(self, vertex: int, g: tuple[int, int, int]) -> None:
        assert g_formula("rigid_string", simple_seq(vertex)).g == g

    def test_kronecker_bands(self) -> None:
        for side in SIDES[:3]:
            s = parse_seq(f"{side.label}:0,")
            expected = TestGVectors.KRONECKER[side.label]
            assert g_formula("band", s).g == expected == KRONECKER_G[side.arrow]

    def test_sum_by_kind(self) -> None:
        """Test that rigid strings sum to 1, bands to 0 and τ-shifts to −1."""
        s = parse_seq("a1:1,2,1")
        assert g_formula("rigid_string", s).total == 1
        assert g_formula("tau_rigid", s).total == -1
        assert g_formula("band", parse_seq("a1:1,2,")).total == 0

    def test_negative_simple_and_shifted_injective(self) -> None:
        assert g_formula("neg_simple", NegativeSimple(2)).g == (0, 1, 0)
        assert g_formula("injective_shift", 3).g == (0, 0, -1)

    def test_tau_of_simple_has_no_closed_form(self) -> None:
        assert g_formula("tau_rigid", simple_seq(1)) is None

    def test_tau_shift_of_inverse_side(self) -> None:
        assert g_formula("tau_rigid", parse_seq("a1-:2")).g == (2, -1, -2)
        assert g_formula("tau_rigid", parse_seq("a1-:1,1")).g == (2, 0, -3)

    def test_tau_shifts_are_injective(self) -> None:
        shifted = [g_formula("tau_rigid", s) for s in rigid_sequences(3, 2, simples=False)]
        vectors = [g.g for g in shifted if g is not None]
        assert len(vectors) == len(shifted)
        assert len(set(vectors)) == len(vectors)

    def test_tau_shift_sits_at_the_point_of_its_string(self) -> None:
        """Test that Z and its τ-shift are the ccw and cw vectors of one point and rotation."""
        for s in rigid_sequences(3, 2, simples=False):
            string = gvector_to_curve(g_formula("rigid_string", s))
            shifted = gvector_to_curve(g_formula("tau_rigid", s))
            assert shifted.family == "cw"
            assert (shifted.point, shifted.rotation) == (string.point, string.rotation), s

    def test_mirror_swaps_orientation(self) -> None:
        s = parse_seq("a1:1,2,1")
        assert mirror(s).x1.inverse
        assert mirror(mirror(s)) == s

    def test_unknown_kind(self) -> None:
        with pytest.raises(InvalidInputError):
            g_formula("string", simple_seq(1))
