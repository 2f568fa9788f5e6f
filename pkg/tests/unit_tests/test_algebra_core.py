import pytest

from common.errors import InvalidInputError, TruncationTooSmallError
from torus_lab.algebra_core import (
    ARROWS,
    NEXT,
    Arrow,
    Path,
    TruncatedAlgebra,
    arrows_between,
    default_truncation,
    injective,
    is_relation,
    jacobian_relations,
    nil,
    path_basis,
    projective,
    rank_of,
    rep_from_entries,
    socle_dims,
    zero_rep,
)


class TestQuiver:
    """Test the Markov quiver and its relations."""

    def test_arrow_endpoints(self) -> None:
        """Test that α goes 1→2, β goes 2→3 and γ goes 3→1."""
        assert arrows_between(1, 2) == (Arrow.A1, Arrow.A2)
        assert arrows_between(2, 3) == (Arrow.B1, Arrow.B2)
        assert arrows_between(3, 1) == (Arrow.G1, Arrow.G2)

    def test_no_arrows_backwards(self) -> None:
        with pytest.raises(InvalidInputError):
            arrows_between(2, 1)

    def test_six_relations(self) -> None:
        """Test that γ₁β₁, α₁γ₁, β₁α₁ and their index-2 twins vanish."""
        relations = jacobian_relations()
        assert len(relations) == 6
        assert is_relation(Arrow.B1, Arrow.G1)
        assert is_relation(Arrow.A2, Arrow.B2)
        assert not is_relation(Arrow.A1, Arrow.B2)

    def test_next_arrow_alternates_index(self) -> None:
        """Test that the only nonzero continuation switches the index."""
        for arrow in ARROWS:
            follower = NEXT[arrow]
            assert follower.source == arrow.target
            assert follower.index != arrow.index
            assert not is_relation(arrow, follower)

    def test_path_rejects_relations(self) -> None:
        with pytest.raises(InvalidInputError):
            Path(1, (Arrow.A1, Arrow.B1))


class TestTruncation:
    """Test the truncated algebras Λ_p."""

    @pytest.mark.parametrize("p, expected", [(2, 9), (3, 15), (4, 21)])
    def test_path_basis_size(self, p: int, expected: int) -> None:
        """Test that Λ_p has 3 idempotents and 6 paths of each length below p."""
        assert len(path_basis(p)) == expected
        assert TruncatedAlgebra.of(p).dimension == expected

    def test_path_basis_is_ordered_by_length(self) -> None:
        lengths = [len(q) for q in path_basis(4)]
        assert lengths == sorted(lengths)

    def test_truncation_too_small(self) -> None:
        with pytest.raises(TruncationTooSmallError):
            TruncatedAlgebra.of(1)


class TestModules:
    """Test projectives, injectives and nilpotency."""

    def test_injective_dimensions(self) -> None:
        assert injective(1, 2).dims == (1, 0, 2)
        assert injective(1, 3).dims == (1, 2, 2)

    def test_projective_dimensions(self) -> None:
        assert projective(1, 2).dims == (1, 2, 0)

    @pytest.mark.parametrize("vertex", [1, 2, 3])
    def test_injective_has_simple_socle(self, vertex: int) -> None:
        """Test that I(i) has socle S_i."""
        rep = injective(vertex, 3)
        expected = [0, 0, 0]
        expected[vertex - 1] = 1
        assert socle_dims(rep) == tuple(expected)
        assert rep.satisfies_relations()

    def test_nil_of_projective(self) -> None:
        """Test that paths of length p vanish on modules over Λ_p."""
        assert nil(projective(2, 3)) == 3
        assert nil(zero_rep()) == 0

    def test_default_truncation(self) -> None:
        rep = projective(1, 3)
        assert default_truncation(rep) == 5
        assert default_truncation(rep, p=4) == 4
        with pytest.raises(TruncationTooSmallError):
            default_truncation(rep, p=3)


class TestExplicitReps:
    """Test the validation of hand-built representations."""

    def test_zero_relation_is_enforced(self) -> None:
        """Test that β₁α₁ acting nonzero is refused."""
        with pytest.raises(InvalidInputError, match="zero relation"):
            rep_from_entries((1, 1, 1), {Arrow.A1: {(0, 0): 1}, Arrow.B1: {(0, 0): 1}})

    def test_non_nilpotent_cycle_is_refused(self) -> None:
        """Test that a nonzero cycle along the allowed compositions is refused."""
        entries = {
            Arrow.A1: {(0, 0): 1},
            Arrow.B2: {(0, 0): 1},
            Arrow.G1: {(1, 0): 1},
            Arrow.A2: {(1, 1): 1},
            Arrow.B1: {(1, 1): 1},
            Arrow.G2: {(0, 1): 1},
        }
        with pytest.raises(InvalidInputError, match="nilpotent"):
            rep_from_entries((2, 2, 2), entries)

    def test_single_arrow(self) -> None:
        rep = rep_from_entries((1, 1, 0), {Arrow.A1: {(0, 0): 1}})
        assert nil(rep) == 2


class TestRank:
    """Test the rank helper over both fields."""

    @pytest.mark.parametrize("kind", ["rational", "prime"])
    def test_rank_of_small_system(self, kind: str) -> None:
        entries = {(0, 0): 1, (0, 1): 2, (1, 0): 2, (1, 1): 4, (2, 2): 3}
        assert rank_of(entries, (3, 3), kind) == 2

    def test_rank_of_empty_shape(self) -> None:
        assert rank_of({}, (0, 4)) == 0

    def test_unknown_field(self) -> None:
        with pytest.raises(InvalidInputError):
            rank_of({(0, 0): 1}, (1, 1), "complex")
