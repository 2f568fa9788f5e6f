import json

import pytest


class TestCodes:
    """Test the encode and decode subcommands."""

    def test_encode(self, run_cli) -> None:
        code, out, _ = run_cli("encode", "a1:1,1,2,1,1")
        assert code == 0
        assert out == "a1:1|2|2\n"

    def test_decode_negative_simple(self, run_cli) -> None:
        code, out, _ = run_cli("decode", "a1:0|-1")
        assert code == 0
        assert out == "S3-\n"

    def test_not_rigid(self, run_cli) -> None:
        code, out, err = run_cli("encode", "a1:1,2,1,1,2,1")
        assert code == 1
        assert out == ""
        assert err.startswith("error[no-psi-form]")


class TestInvariants:
    """Test g-vectors, E-invariants and Markov numbers from the command line."""

    def test_gvec_copresentation(self, run_cli) -> None:
        code, out, _ = run_cli("gvec", "a1:0", "--method", "copresentation")
        assert code == 0
        assert out == "(-1,0,2)\n"

    def test_gvec_json(self, run_cli) -> None:
        code, out, _ = run_cli("gvec", "a1:1", "--output", "json")
        assert code == 0
        assert json.loads(out) == [0, -1, 2]

    def test_gvec_of_tau_shift(self, run_cli) -> None:
        code, out, _ = run_cli("gvec", "a1-:1,1", "--algebra", "tau-prime")
        assert code == 0
        assert out == "(2,0,-3)\n"

    def test_e_invariant_with_decoration(self, run_cli) -> None:
        code, out, _ = run_cli("e-inv", "a1:0", "S1-", "--method", "hom")
        assert code == 0
        assert out == "1\n"

    def test_combinatorial_e_invariant_with_decoration(self, run_cli) -> None:
        code, out, _ = run_cli("e-inv", "a1:0", "S1-", "--method", "comb")
        assert code == 0
        assert out == ">0\n"

    @pytest.mark.parametrize("left, right", [("a1:1", "b1:1"), ("a1:1", "a1-:1"), ("b1:1,", "a1:2")])
    def test_combinatorial_e_invariant_across_sides(self, run_cli, left: str, right: str) -> None:
        """Test that pairs without a shared x₁ agree with the Hom computation."""
        code, out, _ = run_cli("e-inv", left, right, "--method", "comb")
        assert code == 0
        _, value, _ = run_cli("e-inv", left, right, "--method", "hom")
        assert out == ("0\n" if value == "0\n" else ">0\n")

    @pytest.mark.parametrize("method", ["dp", "subsets", "recurrence", "cc"])
    def test_markov(self, run_cli, method: str) -> None:
        code, out, _ = run_cli("markov", "a1:1", "--method", method)
        assert code == 0
        assert out == "5\n"

    def test_markov_of_band_needs_a_string(self, run_cli) -> None:
        code, _, err = run_cli("markov", "a1:1,")
        assert code == 1
        assert err.startswith("error[unsupported]")


class TestGraphs:
    """Test graph export and mutation."""

    def test_seed_graph(self, run_cli) -> None:
        code, out, _ = run_cli("graph", "--max-n", "0")
        assert code == 0
        assert out.count(" -- ") == 3

    def test_mutate(self, run_cli) -> None:
        """Test that {S₃⁻, S₁} completes to (α₁:1|1) and S₂⁻."""
        code, out, _ = run_cli("mutate", "S3-", "a1:0")
        assert code == 0
        assert out == "a1:1|1\ng1:0|-1\n"

    def test_markov_tree(self, run_cli) -> None:
        code, out, _ = run_cli("markov-tree", "--depth", "1")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "-\t(1,1,1)"
        assert len(lines) == 4


class TestGeometry:
    """Test Farey points and snake graphs."""

    def test_farey_to_g(self, run_cli) -> None:
        code, out, _ = run_cli("farey", "to-g", "ccw", "1", "1")
        assert code == 0
        assert out == "(0,2,-1)\n"

    @pytest.mark.parametrize("method", ["transfer", "brute", "string"])
    def test_snake(self, run_cli, method: str) -> None:
        code, out, _ = run_cli("snake", "+-", "--method", method)
        assert code == 0
        assert out == "5\n"


class TestEnumeration:
    """Test listing and scanning."""

    def test_enumerate_rigid(self, run_cli) -> None:
        code, out, _ = run_cli("enumerate", "--kind", "rigid", "--max-n", "1", "--max-a", "1")
        assert code == 0
        assert "a1:1\ta1:1|1" in out.splitlines()

    def test_scan_without_collisions(self, run_cli) -> None:
        code, out, _ = run_cli("scan", "--max-n", "1", "--max-a", "3")
        assert code == 0
        assert out == "no collisions\n"
