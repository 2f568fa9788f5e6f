"""Test error handling and edge cases."""

import pytest

from common import errors
from common.errors import (
    InvalidSequenceError,
    MalformedPsiError,
    NoPsiFormError,
    TorusLabError,
    TruncationTooSmallError,
)
from torus_lab.algebra_core import path_basis
from torus_lab.strings_bands import parse_psi, parse_seq, psi_encode


class TestErrorHandling:
    """Test suite for the error taxonomy and edge cases."""

    def test_every_error_is_a_value_error_with_a_name(self) -> None:
        """Test that each exported error derives from the base class and is named."""
        names = set()
        for attr in errors.__all__:
            cls = getattr(errors, attr)
            assert issubclass(cls, TorusLabError)
            assert issubclass(cls, ValueError)
            assert cls.name
            names.add(cls.name)
        assert "truncation-too-small" in names
        assert "not-a-component-gvector" in names
        assert "search-bound-exceeded" in names

    def test_truncation_below_two_raises(self) -> None:
        """Test that Λ_p with p < 2 is refused."""
        with pytest.raises(TruncationTooSmallError):
            path_basis(1)

    @pytest.mark.parametrize("text", ["a2:1", "a1:", "a1:1,,2", "x1:1", "a1:-1"])
    def test_malformed_sequences_raise(self, text: str) -> None:
        """Test that malformed sequence text raises invalid-sequence."""
        with pytest.raises(InvalidSequenceError):
            parse_seq(text)

    def test_zero_inside_a_sequence_raises(self) -> None:
        """Test that 0 is allowed only as the single entry."""
        with pytest.raises(InvalidSequenceError):
            parse_seq("a1:1,0")

    @pytest.mark.parametrize("text", ["a1:1|1|1", "a1:0|2", "a1:0|1|1", "a1:1|0", "a1:1"])
    def test_malformed_psi_codes_raise(self, text: str) -> None:
        """Test the Ψ shape rules: k_m ≥ 2 when m ≥ 1 and the two a=0 codes."""
        with pytest.raises(MalformedPsiError):
            parse_psi(text)

    def test_non_rigid_string_has_no_psi_form(self) -> None:
        """Test that encoding a non-rigid string raises no-psi-form."""
        with pytest.raises(NoPsiFormError):
            psi_encode(parse_seq("a1:1,2,1,1,2,1"))

    def test_cli_reports_error_name_and_exit_code(self, run_cli) -> None:
        """Test that a domain error becomes exit code 1 with error[name] on stderr."""
        code, out, err = run_cli("encode", "a1:1,2,1,1,2,1")
        assert code == 1
        assert out == ""
        assert err.startswith("error[no-psi-form]")

    def test_cli_reports_malformed_input(self, run_cli) -> None:
        """Test that unparsable codes are reported, not raised."""
        code, _, err = run_cli("decode", "a1:1|1|1")
        assert code == 1
        assert "error[malformed-psi]" in err
