from itertools import product

import pytest

from common.errors import InvalidParameterError
from torus_lab.markov_numbers import m_dp
from torus_lab.snake_graphs import (
    BRUTE_FORCE_LIMIT,
    SignFunction,
    directions,
    matchings,
    matchings_bruteforce,
    snake_graph,
    string_from_signs,
    tile_origins,
)
from tests.test_data import TestSnakes


class TestSignFunctions:
    """Test parsing and validation of sign functions."""

    def test_parse(self) -> None:
        sf = SignFunction.parse("+-+")
        assert sf.d == 4
        assert sf.signs == (1, -1, 1)
        assert str(sf) == "+-+"

    def test_single_tile(self) -> None:
        assert SignFunction.parse(".") == SignFunction(1)
        assert SignFunction.parse("") == SignFunction(1)
        assert str(SignFunction(1)) == "."

    @pytest.mark.parametrize("kwargs", [{"d": 0}, {"d": 3, "signs": (1,)}, {"d": 2, "signs": (2,)}])
    def test_invalid(self, kwargs: dict) -> None:
        with pytest.raises(InvalidParameterError):
            SignFunction(**kwargs)

    def test_unexpected_character(self) -> None:
        with pytest.raises(InvalidParameterError):
            SignFunction.parse("+x")


class TestSnakeGraphs:
    """Test the tile layout of snake graphs."""

    def test_alternating_signs_are_straight(self) -> None:
        assert tile_origins(SignFunction.parse("+-")) == [(0, 0), (0, 1), (0, 2)]

    def test_equal_signs_turn(self) -> None:
        assert tile_origins(SignFunction.parse("++")) == [(0, 0), (0, 1), (1, 1)]

    @pytest.mark.parametrize("signs", ["+", "+-", "++-", "-+-+"])
    def test_size(self, signs: str) -> None:
        sf = SignFunction.parse(signs)
        g = snake_graph(sf)
        assert g.number_of_nodes() == 2 * sf.d + 2
        assert g.number_of_edges() == 3 * sf.d + 1


class TestMatchings:
    """Test perfect matching counts."""

    @pytest.mark.parametrize("signs, count", list(TestSnakes.MATCHINGS.items()))
    def test_transfer(self, signs: str, count: int) -> None:
        assert matchings(SignFunction.parse(signs)) == count

    @pytest.mark.parametrize("d", range(1, 6))
    def test_enumeration_agrees(self, d: int) -> None:
        for signs in product((1, -1), repeat=d - 1):
            sf = SignFunction(d, signs)
            assert matchings_bruteforce(sf) == matchings(sf)

    @pytest.mark.parametrize("d", range(1, 9))
    def test_string_diagram_agrees(self, d: int) -> None:
        """Test that the snake counts the successor-closed subsets of its string."""
        for signs in product((1, -1), repeat=d - 1):
            sf = SignFunction(d, signs)
            assert m_dp(string_from_signs(sf)) == matchings(sf)

    def test_symmetries(self) -> None:
        sf = SignFunction.parse("++-+")
        assert matchings(sf.flipped()) == matchings(sf)
        assert matchings(sf.reversed()) == matchings(sf)

    def test_enumeration_limit(self) -> None:
        sf = SignFunction(BRUTE_FORCE_LIMIT + 1, (1,) * BRUTE_FORCE_LIMIT)
        with pytest.raises(InvalidParameterError):
            matchings_bruteforce(sf)

    def test_directions(self) -> None:
        assert directions(SignFunction.parse("+-+")) == ["down", "up", "down"]
        assert string_from_signs(SignFunction(1)) == ()
