"""The graphs Γ and Γ′ of strongly reduced components, built up to bounds.

Vertices are rigid strings (simples included), strongly reduced bands and
the negative simples; Γ′ adds a τ-copy of every rigid vertex. Loops are
implicit and never stored.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Any, Iterable, Optional, Union

import jsonschema
import networkx as nx

from common.errors import (
    InvalidInputError,
    NotAnEdgeError,
    SearchBoundExceededError,
)

from .classification import (
    KINDS,
    GVector,
    edge_rigid,
    edge_string_band,
    g_formula,
    rigid_entries,
)
from .markov_numbers import m_recurrence
from .strings_bands import (
    SIDES,
    NegativeSimple,
    PsiCode,
    SeqForm,
    canonical,
    dims_of,
    format_psi,
    psi_decode,
    psi_encode,
    simple_seq,
    size,
)

logger = logging.getLogger(__name__)

Component = Union[SeqForm, NegativeSimple]

GRAPH_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["vertices", "edges"],
    "properties": {
        "vertices": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "kind", "code", "g", "dims", "markov"],
                "properties": {
                    "id": {"type": "integer", "minimum": 0},
                    "kind": {"enum": list(KINDS)},
                    "code": {"type": "string"},
                    "g": {
                        "oneOf": [
                            {"type": "array", "items": {"type": "integer"}, "minItems": 3, "maxItems": 3},
                            {"type": "null"},
                        ]
                    },
                    "dims": {
                        "oneOf": [
                            {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 3, "maxItems": 3},
                            {"type": "null"},
                        ]
                    },
                    "markov": {"oneOf": [{"type": "string", "pattern": "^[0-9]+$"}, {"type": "null"}]},
                },
            },
        },
        "edges": {
            "type": "array",
            "items": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
        },
    },
}


# --------------------------------------------------------------------------
# Codes and components


def negative_code(vertex: int) -> PsiCode:
    """The code (x₁:0|−1) of 𝒮ᵢ⁻, with x₁ the direct index-1 arrow avoiding ``vertex``."""
    for side in SIDES:
        if not side.inverse and side.third_vertex == vertex:
            return PsiCode(side, 0, (), -1)
    raise InvalidInputError(f"unknown vertex {vertex}")


def simple_code(vertex: int) -> PsiCode:
    return PsiCode(simple_seq(vertex).x1, 0, (), 1)


def component_of(code: PsiCode) -> Component:
    """Return the canonical component a code names."""
    decoded = psi_decode(code)
    if isinstance(decoded, NegativeSimple):
        return decoded
    return canonical(decoded)


def code_of(component: Component) -> PsiCode:
    if isinstance(component, NegativeSimple):
        return negative_code(component.vertex)
    if component.is_simple:
        return simple_code(component.x1.source)
    return psi_encode(component)


def adjacent(z1: Component, z2: Component) -> bool:
    """Edge predicate between two components of Γ; equal components count as loops."""
    if z1 == z2:
        return True
    if isinstance(z1, NegativeSimple) and isinstance(z2, NegativeSimple):
        return True
    if isinstance(z1, NegativeSimple) or isinstance(z2, NegativeSimple):
        neg, other = (z1, z2) if isinstance(z1, NegativeSimple) else (z2, z1)
        assert isinstance(neg, NegativeSimple) and isinstance(other, SeqForm)
        return dims_of(other)[neg.vertex - 1] == 0
    if z1.is_band and z2.is_band:
        return False
    if z1.is_band or z2.is_band:
        band, string = (z1, z2) if z1.is_band else (z2, z1)
        return edge_string_band(string, band)
    return edge_rigid(z1, z2)


# --------------------------------------------------------------------------
# Records and the graph container


@dataclass(frozen=True)
class ComponentRecord:
    """Vertex payload: kind, naming code, g-vector, dimension vector and Markov number."""

    kind: str
    code: Union[PsiCode, int]
    g: Optional[GVector]
    dims: Optional[tuple[int, int, int]]
    markov: Optional[int] = None

    @property
    def component(self) -> Component:
        if isinstance(self.code, int):
            return NegativeSimple(self.code)
        return component_of(self.code)

    @property
    def label(self) -> str:
        if self.kind == "neg_simple":
            return f"S{self.code}-"
        if self.kind == "injective_shift":
            return f"I{self.code}"
        assert isinstance(self.code, PsiCode)
        text = format_psi(self.code)
        return f"t({text})" if self.kind == "tau_rigid" else text

    @property
    def size(self) -> int:
        return 0 if isinstance(self.code, int) else size(self.code)

    @property
    def is_rigid(self) -> bool:
        return self.kind != "band"

    def sort_key(self) -> tuple[Any, ...]:
        code_key = (self.code,) if isinstance(self.code, int) else self.code.sort_key()
        return (KINDS.index(self.kind), code_key)


def record_for(component: Component, code: Optional[PsiCode] = None) -> ComponentRecord:
    """Build the record of a Γ-vertex; ``code`` overrides the encoded name."""
    if isinstance(component, NegativeSimple):
        return ComponentRecord(
            "neg_simple", component.vertex, g_formula("neg_simple", component), (0, 0, 0), 1
        )
    code = code or code_of(component)
    if component.is_band:
        return ComponentRecord("band", code, g_formula("band", component), dims_of(component))
    return ComponentRecord(
        "rigid_string",
        code,
        g_formula("rigid_string", component),
        dims_of(component),
        m_recurrence(component),
    )


def tau_record(record: ComponentRecord) -> ComponentRecord:
    """The τ-copy of a rigid Γ-vertex in Γ′; bands are their own τ-copy."""
    if record.kind == "band":
        return record
    if record.kind == "neg_simple":
        return ComponentRecord("injective_shift", record.code, g_formula("injective_shift", record.code), None)
    if record.kind != "rigid_string":
        raise InvalidInputError(f"no τ-copy for kind {record.kind}")
    component = record.component
    assert isinstance(component, SeqForm)
    return ComponentRecord("tau_rigid", record.code, g_formula("tau_rigid", component), None)


@dataclass
class ComponentGraph:
    """A networkx graph keyed by vertex label, with the record on each node."""

    graph: nx.Graph = field(default_factory=nx.Graph)
    by_component: dict[tuple[str, Component], str] = field(default_factory=dict)

    def add(self, record: ComponentRecord) -> str:
        key = (record.kind, record.component)
        if key in self.by_component:
            return self.by_component[key]
        self.graph.add_node(record.label, record=record)
        self.by_component[key] = record.label
        return record.label

    def record(self, label: str) -> ComponentRecord:
        return self.graph.nodes[label]["record"]

    def label_of(self, component: Component, kind: Optional[str] = None) -> Optional[str]:
        if kind is None:
            if isinstance(component, NegativeSimple):
                kind = "neg_simple"
            else:
                kind = "band" if component.is_band else "rigid_string"
        return self.by_component.get((kind, component))

    @property
    def vertices(self) -> list[ComponentRecord]:
        return sorted((self.record(n) for n in self.graph.nodes), key=ComponentRecord.sort_key)

    @property
    def edges(self) -> list[tuple[str, str]]:
        order = {r.label: i for i, r in enumerate(self.vertices)}
        pairs = [tuple(sorted((u, v), key=order.__getitem__)) for u, v in self.graph.edges]
        return sorted(pairs, key=lambda e: (order[e[0]], order[e[1]]))  # type: ignore[return-value]

    def neighbors(self, label: str) -> list[str]:
        return sorted(self.graph.neighbors(label))

    def subgraph(self, labels: Iterable[str]) -> nx.Graph:
        return self.graph.subgraph(labels)

    def __len__(self) -> int:
        return self.graph.number_of_nodes()


def seed_graph() -> ComponentGraph:
    """The initial cluster {𝒮₁⁻, 𝒮₂⁻, 𝒮₃⁻} and nothing else."""
    g = ComponentGraph()
    labels = [g.add(record_for(NegativeSimple(v))) for v in (1, 2, 3)]
    g.graph.add_edges_from(combinations(labels, 2))
    return g


# --------------------------------------------------------------------------
# Γ


def _rigid_codes(max_n: int, max_a: int) -> list[PsiCode]:
    codes = [simple_code(v) for v in (1, 2, 3)]
    for a in range(1, max_a + 1):
        table = list(rigid_entries(max_n, a))
        for x1 in SIDES:
            codes.extend(psi_encode(SeqForm(x1, entries)) for entries in table)
    return codes


def _evaluate_pairs(
    g: ComponentGraph, pairs: list[tuple[str, str]], threads: int
) -> list[tuple[str, str]]:
    components = {label: g.record(label).component for label in g.graph.nodes}

    def check(pair: tuple[str, str]) -> bool:
        return adjacent(components[pair[0]], components[pair[1]])

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            flags = list(pool.map(check, pairs))
    else:
        flags = [check(p) for p in pairs]
    return [p for p, ok in zip(pairs, flags) if ok]


def build_gamma(max_n: int, max_a: int, threads: int = 1) -> ComponentGraph:
    """Build Γ with all rigid strings and bands of size ≤ max_n and a ≤ max_a.

    Bands enter as the partners of the enumerated rigid codes, so the
    Kronecker bands come with the negative simples.
    """
    g = ComponentGraph()
    strings = [negative_code(v) for v in (1, 2, 3)] + _rigid_codes(max_n, max_a)
    for code in strings:
        component = component_of(code)
        g.add(record_for(component, code if not isinstance(component, NegativeSimple) else None))
    for code in strings:
        band = code.as_band()
        g.add(record_for(component_of(band), band))
    labels = [r.label for r in g.vertices]
    pairs = list(combinations(labels, 2))
    g.graph.add_edges_from(_evaluate_pairs(g, pairs, threads))
    logger.info(
        "built Γ with %d vertices and %d edges (max_n=%d, max_a=%d)",
        g.graph.number_of_nodes(),
        g.graph.number_of_edges(),
        max_n,
        max_a,
    )
    return g


# --------------------------------------------------------------------------
# Neighbours and cluster completion


@lru_cache(maxsize=32)
def _pool(bound: int, max_a: int) -> tuple[tuple[PsiCode, Component], ...]:
    """Rigid codes with size ≤ bound and a ≤ max_a, their bands and the negative simples."""
    codes = [negative_code(v) for v in (1, 2, 3)] + _rigid_codes(bound, max_a)
    entries: list[tuple[PsiCode, Component]] = []
    for code in codes:
        entries.append((code, component_of(code)))
        band = code.as_band()
        entries.append((band, component_of(band)))
    return tuple(entries)


def _formula_codes(c: PsiCode, bound: int) -> list[PsiCode]:
    """The neighbour families of a rigid code with a > 0, truncated at ``bound``."""
    x1, a, ks = c.x1, c.a, c.ks
    m, last = len(ks) - 1, ks[-1]
    out: list[PsiCode] = []

    if last >= 3 or (m == 0 and last == 2):
        out.append(PsiCode(x1, a, ks[:-1] + (last - 1,)))
    elif m >= 1 and last == 2:
        j = max((i for i in range(1, m) if ks[i] != 1), default=0)
        out.append(PsiCode(x1, a, ks[: j + 1]))
    else:
        out.append(PsiCode(x1, 0, (), -1))

    if m >= 1:
        out.append(PsiCode(x1, a, ks[:-2] + (ks[-2] + 1,)))
    elif a > 1:
        out.append(PsiCode(x1, a - 1, (1,)))
    else:
        out.append(PsiCode(x1, 0, (), 1))

    out.append(PsiCode(x1, a, ks[:-1] + (last + 1,)))

    j = 0
    while True:
        code = PsiCode(x1, a, ks + (1,) * j + (2,))
        if size(code) > bound:
            break
        out.append(code)
        j += 1

    ell = 2
    while True:
        if last >= 2:
            code = PsiCode(x1, a, ks[:-1] + (last - 1, ell))
        else:
            code = PsiCode(x1, a + 1, (ell - 1,))
        if size(code) > bound:
            break
        out.append(code)
        ell += 1
    return [code for code in out if size(code) <= bound]


def neighbors_psi(c: PsiCode, bound: int, max_a: Optional[int] = None) -> list[PsiCode]:
    """Return the neighbours of ``c`` in Γ with size at most ``bound``.

    Codes with a > 0 use the closed neighbour families plus the band partner
    and the negative simples avoiding the support. Simples, negative simples
    and bands are answered from an exhaustive pool with a ≤ ``max_a``.
    """
    z = component_of(c)
    found: dict[Component, PsiCode] = {}
    if c.a > 0 and not c.is_band:
        candidates = _formula_codes(c, bound) + [c.as_band()]
        candidates += [negative_code(v) for v in (1, 2, 3)]
        for code in candidates:
            other = component_of(code)
            if other != z and other not in found and adjacent(z, other):
                found[other] = code
    else:
        top = max_a if max_a is not None else max(c.a, 1) + 1
        for code, other in _pool(bound, top):
            if other != z and other not in found and adjacent(z, other):
                found[other] = code
    return sorted(found.values(), key=PsiCode.sort_key)


def complete_cluster(z1: PsiCode, z2: PsiCode) -> tuple[PsiCode, PsiCode]:
    """Return the two rigid codes completing {z1, z2} to a 3-cluster.

    Raises:
        NotAnEdgeError: If z1 and z2 are not adjacent rigid components.
        SearchBoundExceededError: If the search does not find exactly two completions.
    """
    c1, c2 = component_of(z1), component_of(z2)
    for c in (c1, c2):
        if isinstance(c, SeqForm) and c.is_band:
            raise NotAnEdgeError(f"{c} is a band, cluster completion needs rigid components")
    if c1 == c2 or not adjacent(c1, c2):
        raise NotAnEdgeError(f"{format_psi(z1)} and {format_psi(z2)} are not adjacent")
    bound = size(z1) + size(z2) + 1
    top = max(z1.a, z2.a, 1) + 1
    second = {component_of(code) for code in neighbors_psi(z2, bound, top)}
    found: list[PsiCode] = []
    for code in neighbors_psi(z1, bound, top):
        other = component_of(code)
        if isinstance(other, SeqForm) and other.is_band:
            continue
        if other in second and adjacent(other, c1) and adjacent(other, c2):
            found.append(code_of(other))
    if len(found) != 2:
        raise SearchBoundExceededError(
            f"found {len(found)} completions of {format_psi(z1)}, {format_psi(z2)} "
            f"within size bound {bound}"
        )
    first, last = sorted(found, key=PsiCode.sort_key)
    return first, last


def clusters(g: ComponentGraph) -> list[frozenset[str]]:
    """Maximal cliques of the graph, sorted."""
    found = [frozenset(c) for c in nx.find_cliques(g.graph)]
    return sorted(found, key=lambda c: sorted(c))


# --------------------------------------------------------------------------
# Structural checks


def g_injective(g: ComponentGraph) -> bool:
    values = [r.g for r in g.vertices if r.g is not None]
    return len(values) == len(set(values))


def band_partner(record: ComponentRecord) -> Component:
    """The rigid string (or negative simple) sharing the band's Ψ-code."""
    assert isinstance(record.code, PsiCode)
    return component_of(record.code.as_band(False))


def band_neighbors_ok(g: ComponentGraph) -> list[str]:
    """Return the band labels whose neighbourhood is not exactly their partner."""
    bad = []
    for record in g.vertices:
        if record.kind != "band":
            continue
        neighbours = [n for n in g.neighbors(record.label) if g.record(n).kind != "tau_rigid"]
        partner = g.label_of(band_partner(record))
        if neighbours != [partner]:
            bad.append(record.label)
    return bad


def descent_failures(g: ComponentGraph) -> list[str]:
    """Rigid vertices of positive size without a strictly smaller rigid neighbour."""
    bad = []
    for record in g.vertices:
        if record.kind != "rigid_string" or record.size == 0:
            continue
        smaller = [
            n
            for n in g.neighbors(record.label)
            if g.record(n).kind in ("rigid_string", "neg_simple") and g.record(n).size < record.size
        ]
        if not smaller:
            bad.append(record.label)
    return bad


def rigid_components(g: ComponentGraph) -> list[set[str]]:
    rigid = [n for n in g.graph.nodes if g.record(n).is_rigid]
    parts = [set(c) for c in nx.connected_components(g.subgraph(rigid))]
    return sorted(parts, key=lambda c: sorted(c))


# --------------------------------------------------------------------------
# Γ′


def build_gamma_prime(max_n: int, max_a: int, threads: int = 1) -> ComponentGraph:
    """Γ together with a τ-copy of every rigid vertex.

    Bands coincide with their τ-copy, so Γ-edges between a band and a rigid
    string are mirrored onto the τ-copy of the string; τ𝒮ᵢ⁻ is the shifted
    injective Iᵢ.
    """
    base = build_gamma(max_n, max_a, threads)
    g = ComponentGraph()
    for record in base.vertices:
        g.add(record)
    g.graph.add_edges_from(base.graph.edges)
    image: dict[str, str] = {}
    for record in base.vertices:
        copy = tau_record(record)
        if copy is record:
            image[record.label] = record.label
        else:
            g.graph.add_node(copy.label, record=copy)
            image[record.label] = copy.label
    g.graph.add_edges_from((image[u], image[v]) for u, v in base.graph.edges)
    logger.info(
        "built Γ′ with %d vertices and %d edges", g.graph.number_of_nodes(), g.graph.number_of_edges()
    )
    return g


# --------------------------------------------------------------------------
# Export


def to_json_data(g: ComponentGraph) -> dict[str, Any]:
    vertices = g.vertices
    ids = {r.label: i for i, r in enumerate(vertices)}
    data = {
        "vertices": [
            {
                "id": ids[r.label],
                "kind": r.kind,
                "code": r.label,
                "g": list(r.g.g) if r.g is not None else None,
                "dims": list(r.dims) if r.dims is not None else None,
                "markov": str(r.markov) if r.markov is not None else None,
            }
            for r in vertices
        ],
        "edges": [[ids[u], ids[v]] for u, v in g.edges],
    }
    jsonschema.validate(data, GRAPH_SCHEMA)
    return data


def export(g: ComponentGraph, fmt: str) -> str:
    """Render the graph as ``dot`` or ``json``; vertices sorted by (kind, code).

    Raises:
        InvalidInputError: For an unknown format.
    """
    if fmt == "json":
        return json.dumps(to_json_data(g), indent=2, sort_keys=True)
    if fmt == "dot":
        vertices = g.vertices
        ids = {r.label: i for i, r in enumerate(vertices)}
        lines = ["graph Gamma {"]
        lines += [f'  {ids[r.label]} [label="{r.label}"];' for r in vertices]
        lines += [f"  {ids[u]} -- {ids[v]};" for u, v in g.edges]
        lines.append("}")
        return "\n".join(lines) + "\n"
    raise InvalidInputError(f"unknown export format {fmt!r}")
