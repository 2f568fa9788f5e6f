"""Define the verification graph.

Every acceptance check is a node that appends a CheckResult. Suite "fast"
runs the cheap checks at reduced bounds; suite "all" continues into the
graph-building and p-stability checks at the acceptance bounds.
"""

from __future__ import annotations

import functools
import logging
import random
from dataclasses import dataclass, fields, replace
from itertools import combinations, product
from typing import Any, Callable, Dict, List, Literal

import networkx as nx
from langgraph.graph import StateGraph
from langgraph.runtime import Runtime

from common.context import Context
from common.errors import InvalidParameterError, SearchBoundExceededError, TorusLabError
from common.utils import fibonacci
from torus_lab.algebra_core import VERTICES
from torus_lab.classification import (
    g_formula,
    is_rigid,
    is_strongly_reduced_band,
    rigid_sequences,
    sequences,
    strongly_reduced_bands,
)
from torus_lab.component_graph import (
    ComponentRecord,
    adjacent,
    band_neighbors_ok,
    build_gamma,
    build_gamma_prime,
    clusters,
    complete_cluster,
    descent_failures,
    g_injective,
    negative_code,
    rigid_components,
)
from torus_lab.farey_geometry import compatible, decompose_z3, gvector_to_curve
from torus_lab.markov_numbers import (
    SUBSET_LIMIT,
    collision_scan,
    m_dp,
    m_recurrence,
    m_subsets,
    markov_bounds,
    synchronous_walk,
    triple_tree,
)
from torus_lab.rep_lab import (
    admissible_pairs,
    decorated,
    e_invariant,
    end_dim,
    g_vector_copresentation,
    hom_dim,
    p_stable,
)
from torus_lab.snake_graphs import (
    SignFunction,
    matchings,
    matchings_bruteforce,
    string_from_signs,
)
from torus_lab.state import CheckResult, VerifyInput, VerifyState
from torus_lab.strings_bands import (
    SIDES,
    NegativeSimple,
    PsiCode,
    SeqForm,
    StringWord,
    seq_module,
    seq_to_word,
    simple_seq,
    string_module,
)

logger = logging.getLogger(__name__)

PRINTED_G = {(-1, 0, 2), (2, -1, 0), (0, 2, -1), (1, -1, 0), (0, 1, -1), (-1, 0, 1)}

Update = Dict[str, List[CheckResult]]


@dataclass(frozen=True)
class SuiteBounds:
    """Enumeration bounds per check, as (max_n, max_a) pairs where applicable."""

    hom: tuple[int, int]
    rigidity: tuple[int, int]
    bands: tuple[int, int]
    g_vectors: tuple[int, int]
    graph: tuple[int, int]
    markov: tuple[int, int]
    fibonacci: int
    splits: int
    walk_depth: int
    farey_norm: int
    snake_d: int
    brute_d: int
    scan: tuple[int, int]


SUITES = {
    "fast": SuiteBounds(
        hom=(2, 1),
        rigidity=(3, 2),
        bands=(3, 2),
        g_vectors=(3, 2),
        graph=(3, 2),
        markov=(4, 2),
        fibonacci=12,
        splits=40,
        walk_depth=2,
        farey_norm=3,
        snake_d=8,
        brute_d=6,
        scan=(4, 2),
    ),
    "all": SuiteBounds(
        hom=(4, 2),
        rigidity=(6, 3),
        bands=(5, 3),
        g_vectors=(5, 3),
        graph=(5, 3),
        markov=(6, 3),
        fibonacci=30,
        splits=200,
        walk_depth=6,
        farey_norm=3,
        snake_d=12,
        brute_d=10,
        scan=(5, 3),
    ),
}


def _suite(state: VerifyState) -> SuiteBounds:
    try:
        return SUITES[state.suite]
    except KeyError:
        raise InvalidParameterError(
            f"unknown suite {state.suite!r}; expected one of {sorted(SUITES)}"
        ) from None


def _bounds(state: VerifyState, runtime: Runtime[Context]) -> SuiteBounds:
    """Return the suite's bounds, with every (max_n, max_a) pair capped by the context."""
    bounds = _suite(state)
    ctx = _context(runtime)
    capped = {
        f.name: (min(value[0], ctx.max_n), min(value[1], ctx.max_a))
        for f in fields(bounds)
        if isinstance(value := getattr(bounds, f.name), tuple)
    }
    return replace(bounds, **capped)


def _context(runtime: Runtime[Context]) -> Context:
    return runtime.context if runtime.context is not None else Context()


def _report(name: str, failures: List[str], checked: int, flagged: bool = False) -> Update:
    passed = not failures
    if passed:
        detail = f"{checked} checked"
        logger.info("%s: %s", name, detail)
    else:
        detail = f"{len(failures)} of {checked} failed: " + ", ".join(failures[:5])
        logger.warning("%s: %s", name, detail)
    return {"results": [CheckResult(name, passed, detail, flagged)]}


def check(name: str) -> Callable[[Callable[..., Update]], Callable[..., Update]]:
    """Turn a domain error inside a check into a failed result."""

    def decorate(fn: Callable[..., Update]) -> Callable[..., Update]:
        @functools.wraps(fn)
        def node(state: VerifyState, runtime: Runtime[Context]) -> Update:
            try:
                return fn(state, runtime)
            except TorusLabError as e:
                logger.warning("%s aborted: error[%s]: %s", name, e.name, e)
                return {"results": [CheckResult(name, False, f"error[{e.name}]: {e}")]}

        return node

    return decorate


def _psi(record: ComponentRecord) -> PsiCode:
    if isinstance(record.code, int):
        return negative_code(record.code)
    return record.code


# --------------------------------------------------------------------------
# Checks run by both suites


@check("hom-oracle")
def check_hom_oracle(state: VerifyState, runtime: Runtime[Context]) -> Update:
    """dim Hom by linear algebra equals the number of admissible pairs."""
    ctx = _context(runtime)
    strings = [simple_seq(v) for v in VERTICES] + list(sequences(*_bounds(state, runtime).hom))
    words = [seq_to_word(s) for s in strings]
    assert all(isinstance(w, StringWord) for w in words)
    modules = [string_module(w) for w in words]  # type: ignore[arg-type]
    failures = []
    pairs = list(product(range(len(strings)), repeat=2))
    for i, j in pairs:
        pairs_ij = admissible_pairs(words[i], words[j])  # type: ignore[arg-type]
        if hom_dim(modules[i], modules[j], ctx.field) != len(pairs_ij):
            failures.append(f"{strings[i]}→{strings[j]}")
    return _report("hom-oracle", failures, len(pairs))


@check("rigidity")
def check_rigidity(state: VerifyState, runtime: Runtime[Context]) -> Update:
    """is_rigid ⇔ E(M,M)=0, and strongly reduced ⇔ End(M(B,1,1)) is one-dimensional."""
    ctx = _context(runtime)
    bounds = _bounds(state, runtime)
    failures = []
    checked = 0
    for s in sequences(*bounds.rigidity):
        dec = decorated(s)
        if (e_invariant(dec, dec, field=ctx.field) == 0) != is_rigid(s):
            failures.append(str(s))
        checked += 1
    for s in sequences(*bounds.bands, band=True):
        if (end_dim(seq_module(s), ctx.field) == 1) != is_strongly_reduced_band(s):
            failures.append(str(s))
        checked += 1
    return _report("rigidity", failures, checked)


@check("g-vectors")
def check_g_vectors(state: VerifyState, runtime: Runtime[Context]) -> Update:
    """Closed-form g-vectors agree with the copresentation and with the printed values."""
    bounds = _bounds(state, runtime)
    corpus = rigid_sequences(*bounds.g_vectors) + strongly_reduced_bands(*bounds.g_vectors)
    failures = []
    for s in corpus:
        expected = g_formula("band" if s.is_band else "rigid_string", s)
        if expected is None or expected.g != g_vector_copresentation(decorated(s)):
            failures.append(str(s))
    printed = {g_formula("rigid_string", simple_seq(v)).g for v in VERTICES}  # type: ignore[union-attr]
    printed |= {g_formula("band", s).g for s in strongly_reduced_bands(1, 1)[:3]}  # type: ignore[union-attr]
    if printed != PRINTED_G:
        failures.append(f"printed values {sorted(printed)}")
    return _report("g-vectors", failures, len(corpus) + 6)


@check("markov")
def check_markov(state: VerifyState, runtime: Runtime[Context]) -> Update:
    """Three routes to m agree; Fibonacci base case, split independence and strict bounds."""
    bounds = _bounds(state, runtime)
    corpus = rigid_sequences(*bounds.markov, sides=SIDES[:1])
    failures = []
    for s in corpus:
        word = seq_to_word(s)
        assert isinstance(word, StringWord)
        value = m_dp(word)
        if value != m_recurrence(s):
            failures.append(f"recurrence {s}")
        if len(word.letters) <= SUBSET_LIMIT and value != m_subsets(word):
            failures.append(f"subsets {s}")
        if len(s.entries) >= 2:
            lower, upper = markov_bounds(s)
            if not lower < value < upper:
                failures.append(f"bounds {s}")
    for a in range(1, bounds.fibonacci + 1):
        word = seq_to_word(SeqForm(SIDES[0], (a,)))
        assert isinstance(word, StringWord)
        if m_dp(word) != fibonacci(2 * a + 3):
            failures.append(f"fibonacci {a}")
    multi = [s for s in corpus if len(s.entries) >= 2]
    rng = random.Random(0)
    for _ in range(bounds.splits if multi else 0):
        s = rng.choice(multi)
        cut = rng.randrange(1, len(s.entries))
        if m_recurrence(s, cut) != m_recurrence(s):
            failures.append(f"split {s} at {cut}")
    return _report("markov", failures, len(corpus) + bounds.fibonacci + bounds.splits)


@check("cluster-bijection")
def check_cluster_bijection(state: VerifyState, runtime: Runtime[Context]) -> Update:
    """Graph mutation tracks seed mutation and the Markov triple tree."""
    depth = _bounds(state, runtime).walk_depth
    tree = triple_tree(depth)
    steps = synchronous_walk(depth)
    failures = [
        "".join(map(str, step.path))
        for step in steps
        if not step.matches or tree.nodes[step.path]["triple"] != step.triple
    ]
    return _report("cluster-bijection", failures, len(steps))


@check("farey")
def check_farey(state: VerifyState, runtime: Runtime[Context]) -> Update:
    """Families of g-vectors, edges as Farey compatibility, and decomposition of Z³."""
    ctx = _context(runtime)
    bounds = _bounds(state, runtime)
    failures = []
    rigid = rigid_sequences(*bounds.g_vectors)
    components: List[Any] = [NegativeSimple(v) for v in VERTICES] + rigid
    curves = []
    for c in components:
        kind = "neg_simple" if isinstance(c, NegativeSimple) else "rigid_string"
        curve = gvector_to_curve(g_formula(kind, c))  # type: ignore[arg-type]
        if curve.family != "ccw":
            failures.append(f"family {c}")
        curves.append(curve)
    for s, curve in zip(rigid, curves[len(VERTICES):]):
        shifted = g_formula("tau_rigid", s)
        if shifted is None:
            continue
        tau_curve = gvector_to_curve(shifted)
        if tau_curve.family != "cw" or (tau_curve.point, tau_curve.rotation) != (curve.point, curve.rotation):
            failures.append(f"family τ{s}")
    for s in strongly_reduced_bands(*bounds.g_vectors):
        if gvector_to_curve(g_formula("band", s)).family != "closed":  # type: ignore[arg-type]
            failures.append(f"family {s}")
    pairs = list(combinations(range(len(components)), 2))
    for i, j in pairs:
        if adjacent(components[i], components[j]) != compatible(curves[i], curves[j]):
            failures.append(f"edge {components[i]}–{components[j]}")
    span = range(-bounds.farey_norm, bounds.farey_norm + 1)
    vectors = list(product(span, repeat=3))
    for v in vectors:
        parts = decompose_z3(v, ctx.stern_brocot_cap)
        if any(k <= 0 for _, k in parts) or not all(
            compatible(x, y) for (x, _), (y, _) in combinations(parts, 2)
        ):
            failures.append(f"decompose {v}")
    return _report("farey", failures, len(components) + len(pairs) + len(vectors))


@check("snakes")
def check_snakes(state: VerifyState, runtime: Runtime[Context]) -> Update:
    """Perfect matchings of the snake equal m of the sign-matched string."""
    bounds = _bounds(state, runtime)
    failures = []
    checked = 0
    for d in range(1, bounds.snake_d + 1):
        for signs in product((1, -1), repeat=d - 1):
            sf = SignFunction(d, signs)
            count = matchings(sf)
            if count != m_dp(string_from_signs(sf)):
                failures.append(f"string {sf}")
            if d <= bounds.brute_d and count != matchings_bruteforce(sf):
                failures.append(f"enumeration {sf}")
            checked += 1
    return _report("snakes", failures, checked)


@check("collisions")
def check_collisions(state: VerifyState, runtime: Runtime[Context]) -> Update:
    """Scan for equal Markov numbers; a collision is flagged, not failed."""
    ctx = _context(runtime)
    found = collision_scan(*_bounds(state, runtime).scan, threads=ctx.threads)
    detail = "; ".join(f"{c.value}: {c.sequences}" for c in found) or "no collisions"
    if found:
        logger.warning("collision scan flagged %d values", len(found))
    return {"results": [CheckResult("collisions", True, detail, bool(found))]}


# --------------------------------------------------------------------------
# Checks run by suite "all" only


@check("graph-structure")
def check_graph_structure(state: VerifyState, runtime: Runtime[Context]) -> Update:
    """Injective g, cluster sizes, band neighbourhoods, descent and two completions per edge."""
    ctx = _context(runtime)
    max_n, max_a = _bounds(state, runtime).graph
    g = build_gamma(max_n, max_a, ctx.threads)
    failures = [] if g_injective(g) else ["g-vectors not distinct"]
    cliques = clusters(g)
    for clique in cliques:
        records = [g.record(label) for label in clique]
        has_band = any(r.kind == "band" for r in records)
        # cliques cut off by the size bound are not judged
        interior = sum(r.size for r in records) + 1 <= max_n
        if len(records) > 3 or (has_band and len(records) != 2):
            failures.append("{" + ",".join(sorted(clique)) + "}")
        elif not has_band and len(records) < 3 and interior:
            failures.append("{" + ",".join(sorted(clique)) + "}")
    failures += [f"band {label}" for label in band_neighbors_ok(g)]
    failures += [f"descent {label}" for label in descent_failures(g)]
    edges = [(g.record(u), g.record(v)) for u, v in g.edges]
    rigid_edges = [(u, v) for u, v in edges if u.is_rigid and v.is_rigid]
    for u, v in rigid_edges:
        try:
            complete_cluster(_psi(u), _psi(v))
        except SearchBoundExceededError:
            failures.append(f"completion {u.label}–{v.label}")
    return _report("graph-structure", failures, len(cliques) + len(rigid_edges) + len(g))


@check("gamma-prime")
def check_gamma_prime(state: VerifyState, runtime: Runtime[Context]) -> Update:
    """Two rigid components swapped by τ, connectedness, τ-shifted g-vectors in the cw family."""
    ctx = _context(runtime)
    g = build_gamma_prime(*_bounds(state, runtime).graph, threads=ctx.threads)
    failures = []
    parts = rigid_components(g)
    base = {"rigid_string", "neg_simple"}
    kinds = [{g.record(label).kind for label in part} for part in parts]
    if len(parts) != 2 or not any(k <= base for k in kinds) or all(k <= base for k in kinds):
        failures.append(f"{len(parts)} rigid components")
    if not nx.is_connected(g.graph):
        failures.append("not connected")
    for record in g.vertices:
        if record.kind == "tau_rigid" and record.g is not None:
            if record.g.total != -1 or gvector_to_curve(record.g).family != "cw":
                failures.append(f"τ g {record.label}")
    if not g_injective(g):
        failures.append("g-vectors not distinct")
    return _report("gamma-prime", failures, len(g))


@check("p-stability")
def check_p_stability(state: VerifyState, runtime: Runtime[Context]) -> Update:
    """E and g do not change between p = nil+2, nil+3 and nil+4."""
    bounds = _bounds(state, runtime)
    corpus = rigid_sequences(*bounds.g_vectors) + strongly_reduced_bands(*bounds.g_vectors)
    failures = []
    for s in corpus:
        dec = decorated(s)
        if not (p_stable(dec) and p_stable(dec, dec)):
            failures.append(str(s))
    return _report("p-stability", failures, len(corpus))


def summarize(state: VerifyState) -> Dict[str, bool]:
    """Set the overall verdict."""
    passed = all(r.passed for r in state.results)
    flagged = [r.name for r in state.results if r.flagged]
    logger.info(
        "suite %s: %d checks, passed=%s, flagged=%s", state.suite, len(state.results), passed, flagged
    )
    return {"passed": passed}


# Define a new graph

builder = StateGraph(VerifyState, input_schema=VerifyInput, context_schema=Context)

FAST_CHECKS = [
    check_hom_oracle,
    check_rigidity,
    check_g_vectors,
    check_markov,
    check_cluster_bijection,
    check_farey,
    check_snakes,
    check_collisions,
]
FULL_CHECKS = [check_graph_structure, check_gamma_prime, check_p_stability]

for node in FAST_CHECKS + FULL_CHECKS:
    builder.add_node(node)
builder.add_node(summarize)

builder.add_edge("__start__", FAST_CHECKS[0].__name__)
for before, after in zip(FAST_CHECKS, FAST_CHECKS[1:]):
    builder.add_edge(before.__name__, after.__name__)


def route_suite(state: VerifyState) -> Literal["summarize", "check_graph_structure"]:
    """Stop after the fast checks unless the full suite was requested.

    Raises:
        InvalidParameterError: For an unknown suite.
    """
    _suite(state)
    if state.suite == "fast":
        return "summarize"
    return "check_graph_structure"


builder.add_conditional_edges(FAST_CHECKS[-1].__name__, route_suite)
for before, after in zip(FULL_CHECKS, FULL_CHECKS[1:]):
    builder.add_edge(before.__name__, after.__name__)
builder.add_edge(FULL_CHECKS[-1].__name__, "summarize")

# Compile the builder into an executable graph
graph = builder.compile(name="Torus Lab Verify")
