import os
from unittest.mock import patch

import pytest

from common.context import FIELDS, OUTPUTS, Context
from common.errors import InvalidParameterError


class TestContextConfiguration:
    """Test suite for Context configuration."""

    @patch.dict(os.environ, {}, clear=True)
    def test_context_defaults(self) -> None:
        """Test the default bounds and settings."""
        context = Context()
        assert context.max_n == 4
        assert context.max_a == 2
        assert context.p_override is None
        assert context.output == "text"
        assert context.stern_brocot_cap == 256
        assert context.threads == 1
        assert context.field == "rational"

    @patch.dict(os.environ, {"TORUS_LAB_MAX_N": "7", "TORUS_LAB_MAX_A": "3"}, clear=True)
    def test_context_init_with_env_vars(self) -> None:
        """Test that integer fields are read and coerced from the environment."""
        context = Context()
        assert context.max_n == 7
        assert context.max_a == 3

    @patch.dict(os.environ, {"TORUS_LAB_MAX_N": "7"}, clear=True)
    def test_context_init_explicit_overrides_env(self) -> None:
        """Test that explicit parameters override environment variables."""
        context = Context(max_n=5)
        assert context.max_n == 5

    @patch.dict(os.environ, {"TORUS_LAB_P_OVERRIDE": "6", "TORUS_LAB_FIELD": "prime"}, clear=True)
    def test_optional_and_string_fields_from_env(self) -> None:
        """Test that p_override and field are loaded from the environment."""
        context = Context()
        assert context.p_override == 6
        assert context.field == "prime"

    @patch.dict(os.environ, {"TORUS_LAB_THREADS": "many"}, clear=True)
    def test_non_integer_env_value_is_rejected(self) -> None:
        """Test that a malformed integer in the environment raises invalid-parameter."""
        with pytest.raises(InvalidParameterError, match="TORUS_LAB_THREADS"):
            Context()

    @pytest.mark.parametrize("field", FIELDS)
    def test_known_fields(self, field: str) -> None:
        """Test that both rank fields are accepted."""
        assert Context(field=field).field == field

    @pytest.mark.parametrize("output", OUTPUTS)
    def test_known_outputs(self, output: str) -> None:
        """Test that every output format is accepted."""
        assert Context(output=output).output == output

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"max_n": -1},
            {"max_a": -2},
            {"threads": 0},
            {"stern_brocot_cap": 0},
            {"p_override": 1},
            {"field": "complex"},
            {"output": "yaml"},
        ],
    )
    @patch.dict(os.environ, {}, clear=True)
    def test_invalid_values_raise(self, kwargs: dict) -> None:
        """Test that out-of-range settings raise invalid-parameter."""
        with pytest.raises(InvalidParameterError):
            Context(**kwargs)
