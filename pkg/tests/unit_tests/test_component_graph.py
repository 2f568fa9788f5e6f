import json

import jsonschema
import networkx as nx
import pytest

from common.errors import InvalidInputError, NotAnEdgeError
from torus_lab.component_graph import (
    GRAPH_SCHEMA,
    adjacent,
    build_gamma,
    build_gamma_prime,
    clusters,
    code_of,
    complete_cluster,
    component_of,
    export,
    g_injective,
    negative_code,
    neighbors_psi,
    record_for,
    rigid_components,
    seed_graph,
    simple_code,
    tau_record,
    to_json_data,
)
from torus_lab.strings_bands import NegativeSimple, parse_psi, parse_seq, simple_seq


class TestCodes:
    """Test naming codes of components."""

    def test_negative_codes(self) -> None:
        """Test that 𝒮ᵢ⁻ is named by the direct index-1 arrow avoiding i."""
        assert str(negative_code(3)) == "a1:0|-1"
        assert str(negative_code(1)) == "b1:0|-1"
        assert str(negative_code(2)) == "g1:0|-1"

    def test_codes_round_trip(self) -> None:
        for component in (NegativeSimple(2), simple_seq(3), parse_seq("a1:1,2,1")):
            assert component_of(code_of(component)) == component

    def test_simple_code(self) -> None:
        assert component_of(simple_code(2)) == simple_seq(2)


class TestAdjacency:
    """Test the edge predicate on components."""

    def test_negative_simples_are_pairwise_adjacent(self) -> None:
        assert adjacent(NegativeSimple(1), NegativeSimple(2))

    def test_negative_simple_and_support(self) -> None:
        """Test that 𝒮ᵢ⁻ meets exactly the strings without support at i."""
        assert adjacent(NegativeSimple(3), simple_seq(1))
        assert not adjacent(NegativeSimple(1), simple_seq(1))
        assert adjacent(NegativeSimple(3), parse_seq("a1:1"))

    def test_bands_are_not_adjacent_to_each_other(self) -> None:
        assert not adjacent(parse_seq("a1:1,"), parse_seq("a1:0,"))


class TestRecords:
    """Test vertex records and their τ-copies."""

    def test_rigid_record(self) -> None:
        record = record_for(parse_seq("a1:1"))
        assert record.kind == "rigid_string"
        assert record.label == "a1:1|1"
        assert record.g.g == (0, -1, 2)
        assert record.dims == (2, 1, 0)
        assert record.markov == 5

    def test_negative_record(self) -> None:
        record = record_for(NegativeSimple(1))
        assert record.label == "S1-"
        assert record.g.g == (1, 0, 0)

    def test_tau_copies(self) -> None:
        assert tau_record(record_for(NegativeSimple(1))).label == "I1"
        copy = tau_record(record_for(parse_seq("a1:1")))
        assert copy.kind == "tau_rigid"
        assert copy.g.total == -1
        band = record_for(parse_seq("a1:1,"))
        assert tau_record(band) is band


class TestSeedGraph:
    """Test the seed cluster graph and export."""

    def test_seed_graph(self) -> None:
        g = seed_graph()
        assert len(g) == 3
        assert len(g.edges) == 3
        assert clusters(g) == [frozenset({"S1-", "S2-", "S3-"})]

    def test_export_dot(self) -> None:
        text = export(seed_graph(), "dot")
        assert text.startswith("graph Gamma {")
        assert text.count(" -- ") == 3

    def test_export_json_validates(self) -> None:
        data = json.loads(export(seed_graph(), "json"))
        jsonschema.validate(data, GRAPH_SCHEMA)
        assert [v["code"] for v in data["vertices"]] == ["S1-", "S2-", "S3-"]

    def test_unknown_format(self) -> None:
        with pytest.raises(InvalidInputError):
            export(seed_graph(), "svg")


class TestCompletion:
    """Test completing an edge to a cluster."""

    def test_neighbors_of_first_string(self) -> None:
        """Test that (α₁:1) meets S₃⁻, the simple S₁ and its own band."""
        code = parse_psi("a1:1|1")
        found = neighbors_psi(code, 4)
        assert negative_code(3) in found
        assert simple_code(1) in found
        assert parse_psi("a1:1|1,") in found
        assert code not in found
        z = component_of(code)
        assert all(adjacent(z, component_of(other)) for other in found)

    def test_mutation_of_initial_cluster(self) -> None:
        """Test that {S₂⁻, S₃⁻} completes to S₁⁻ and to the simple S₁."""
        found = set(complete_cluster(negative_code(2), negative_code(3)))
        assert found == {negative_code(1), simple_code(1)}

    def test_completion_with_simple(self) -> None:
        """Test that {S₃⁻, S₁} completes to S₂⁻ and (α₁:1)."""
        first, second = complete_cluster(negative_code(3), simple_code(1))
        assert {str(first), str(second)} == {"g1:0|-1", "a1:1|1"}

    def test_non_edge(self) -> None:
        with pytest.raises(NotAnEdgeError):
            complete_cluster(negative_code(1), simple_code(1))

    def test_band_is_refused(self) -> None:
        with pytest.raises(NotAnEdgeError):
            complete_cluster(parse_psi("a1:0|1,"), simple_code(1))


@pytest.mark.slow
class TestGamma:
    """Test the graph builders on small bounds."""

    def test_gamma_is_consistent(self) -> None:
        g = build_gamma(2, 1)
        assert g_injective(g)
        to_json_data(g)

    def test_gamma_prime_doubles_rigid_vertices(self) -> None:
        base = build_gamma(2, 1)
        prime = build_gamma_prime(2, 1)
        rigid = [r for r in base.vertices if r.kind != "band"]
        assert len(prime) == len(base) + len(rigid)

    def test_every_rigid_edge_has_two_completions(self) -> None:
        g = build_gamma(2, 1)
        codes = {
            r.label: negative_code(r.code) if isinstance(r.code, int) else r.code for r in g.vertices
        }
        rigid = [(u, v) for u, v in g.edges if g.record(u).is_rigid and g.record(v).is_rigid]
        assert rigid
        for u, v in rigid:
            first, second = complete_cluster(codes[u], codes[v])
            assert first != second
            assert codes[u] not in (first, second) and codes[v] not in (first, second)

    def test_gamma_prime_has_two_rigid_halves(self) -> None:
        """Test that τ-copies form a second rigid component joined to Γ only through bands."""
        prime = build_gamma_prime(2, 1)
        parts = rigid_components(prime)
        assert len(parts) == 2
        kinds = [{prime.record(label).kind for label in part} for part in parts]
        assert {"rigid_string", "neg_simple"} in kinds
        assert {"tau_rigid", "injective_shift"} in kinds
        assert nx.is_connected(prime.graph)
        assert g_injective(prime)
