from itertools import product

import pytest

from common.errors import (
    InvalidInputError,
    NotAComponentGVectorError,
    SearchBoundExceededError,
)
from torus_lab.classification import GVector
from torus_lab.farey_geometry import (
    FareyPoint,
    are_neighbors,
    compatible,
    curve_vector,
    decompose_z3,
    gvector_to_curve,
    place,
    unified_point,
)

E1, E2, E3 = (1, 0, 0), (0, 1, 0), (0, 0, 1)
S1, S3 = (-1, 0, 2), (0, 2, -1)


class TestFareyPoints:
    """Test Farey points and the neighbour relation."""

    def test_non_coprime_point(self) -> None:
        with pytest.raises(InvalidInputError):
            FareyPoint(2, 4)

    def test_neighbors(self) -> None:
        assert are_neighbors((0, 1), (1, 1))
        assert are_neighbors(FareyPoint(1, 2), FareyPoint(1, 1))
        assert not are_neighbors((1, 1), (2, -1))


class TestCurveVectors:
    """Test the three vector families and their inverse."""

    @pytest.mark.parametrize(
        "family, point, rotation, v",
        [
            ("ccw", (1, 1), 0, S3),
            ("ccw", (1, 1), 1, S1),
            ("ccw", (0, 1), 0, E2),
            ("cw", (1, 0), 0, (-1, 0, 0)),
            ("closed", (0, 1), 0, (-1, 0, 1)),
        ],
    )
    def test_family_vectors(self, family: str, point: tuple, rotation: int, v: tuple) -> None:
        assert curve_vector(family, point, rotation).v == v

    def test_outside_domain(self) -> None:
        with pytest.raises(InvalidInputError):
            curve_vector("ccw", (1, 0))
        with pytest.raises(InvalidInputError):
            curve_vector("spiral", (0, 1))

    @pytest.mark.parametrize("g", [E1, E2, E3, S1, S3, (-1, 0, 0), (1, -1, 0), (0, 1, -1)])
    def test_gvector_to_curve_recovers_vector(self, g: tuple) -> None:
        assert gvector_to_curve(g).v == g

    def test_family_follows_the_sum(self) -> None:
        assert gvector_to_curve(GVector(S1)).family == "ccw"
        assert gvector_to_curve((0, 0, -1)).family == "cw"
        assert gvector_to_curve((1, -1, 0)).family == "closed"

    @pytest.mark.parametrize("g", [(1, 1, 1), (2, 0, -2)])
    def test_not_a_component_gvector(self, g: tuple) -> None:
        """Test that sums outside {−1, 0, 1} and non-primitive closed vectors are refused."""
        with pytest.raises(NotAComponentGVectorError):
            gvector_to_curve(g)


class TestCompatibility:
    """Test compatibility on the shared projective line."""

    def test_unified_points(self) -> None:
        assert unified_point(gvector_to_curve(E3)) == (0, 1)
        assert unified_point(gvector_to_curve(E1)) == (-1, 1)
        assert unified_point(gvector_to_curve(S1)) == (1, 1)

    def test_place_inverts_unified_point(self) -> None:
        for point in [(0, 1), (1, 1), (-1, 1), (2, -1), (1, 2)]:
            curve = place(point, "ccw")
            assert unified_point(curve) in (point, (-point[0], -point[1]))

    def test_initial_cluster_is_compatible(self) -> None:
        e1, e2, e3 = (gvector_to_curve(v) for v in (E1, E2, E3))
        assert compatible(e1, e2) and compatible(e2, e3) and compatible(e1, e3)

    def test_simples_are_not_compatible(self) -> None:
        assert not compatible(gvector_to_curve(S1), gvector_to_curve(S3))

    def test_closed_meets_ccw_at_its_point(self) -> None:
        closed = gvector_to_curve((1, -1, 0))
        assert compatible(closed, gvector_to_curve(E3))
        assert not compatible(closed, gvector_to_curve(E2))

    def test_mixed_orientations_are_not_compatible(self) -> None:
        assert not compatible(gvector_to_curve(E3), gvector_to_curve((0, 0, -1)))


class TestDecomposition:
    """Test the decomposition of integer vectors into compatible curve vectors."""

    def test_zero(self) -> None:
        assert decompose_z3((0, 0, 0)) == []

    def test_basis_vector(self) -> None:
        [(curve, k)] = decompose_z3(E3)
        assert curve.v == E3 and k == 1

    def test_closed_multiple(self) -> None:
        [(curve, k)] = decompose_z3((2, -2, 0))
        assert curve.family == "closed"
        assert curve.v == (1, -1, 0) and k == 2

    def test_flip_to_simple(self) -> None:
        """Test that (0,3,−1) is S₃ + e₂ after one flip."""
        parts = decompose_z3((0, 3, -1))
        assert sorted((curve.v, k) for curve, k in parts) == [(E2, 1), (S3, 1)]

    def test_wall_with_closed_part(self) -> None:
        """Test that (1,−1,1) is e₃ plus the closed vector at the same point."""
        parts = decompose_z3((1, -1, 1))
        assert {(curve.family, curve.v, k) for curve, k in parts} == {
            ("ccw", E3, 1),
            ("closed", (1, -1, 0), 1),
        }

    @pytest.mark.parametrize(
        "v",
        [(2, -2, 1), (-2, 2, 1), (2, 1, -2), (-2, 1, 2), (1, 2, -2), (1, 1, 1), (2, 2, -1), (-1, -1, -1)],
    )
    def test_parts_are_pairwise_compatible(self, v: tuple) -> None:
        parts = decompose_z3(v)
        total = [sum(k * curve.v[i] for curve, k in parts) for i in range(3)]
        assert tuple(total) == v
        curves = [curve for curve, _ in parts]
        for i in range(len(curves)):
            for j in range(i + 1, len(curves)):
                assert compatible(curves[i], curves[j])

    def test_cap(self) -> None:
        with pytest.raises(SearchBoundExceededError):
            decompose_z3((0, 3, -1), cap=1)

    @pytest.mark.parametrize(
        "v, family, k",
        [((-3, 2, 0), "cw", 1), ((-3, 2, 2), "ccw", 1), ((2, 2, -3), "ccw", 1), ((-2, 0, 4), "ccw", 2)],
    )
    def test_multiple_of_one_curve(self, v: tuple, family: str, k: int) -> None:
        [(curve, weight)] = decompose_z3(v)
        assert curve.family == family
        assert weight == k
        assert tuple(weight * x for x in curve.v) == v

    @pytest.mark.slow
    def test_cube(self) -> None:
        """Test that every vector of max-norm at most 3 splits into compatible parts."""
        for v in product(range(-3, 4), repeat=3):
            parts = decompose_z3(v)
            assert all(k > 0 for _, k in parts)
            total = tuple(sum(k * curve.v[i] for curve, k in parts) for i in range(3))
            assert total == v
            curves = [curve for curve, _ in parts]
            for i in range(len(curves)):
                for j in range(i + 1, len(curves)):
                    assert compatible(curves[i], curves[j]), (v, curves[i], curves[j])
