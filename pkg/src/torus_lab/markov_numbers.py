"""Markov numbers of rigid strings, Caldero-Chapoton functions and seed mutation.

Three independent routes compute m(C): brute-force subset enumeration on the
string diagram, a two-state transfer along the diagram, and the splitting
recurrence seeded with Fibonacci numbers.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import TYPE_CHECKING, Any, Iterable, Mapping, Optional, Sequence, Union

import networkx as nx
import sympy
from sympy import Poly, cancel, fraction

from common.errors import (
    InternalError,
    InvalidInputError,
    InvalidParameterError,
    UnsupportedError,
)
from common.utils import fibonacci

from .classification import g_formula, rigid_entries
from .strings_bands import NegativeSimple, SeqForm, StringWord, seq_to_word

if TYPE_CHECKING:
    from .component_graph import ComponentRecord

logger = logging.getLogger(__name__)

Exponent = tuple[int, int, int]

SUBSET_LIMIT = 25

X1, X2, X3 = sympy.symbols("x1 x2 x3")
SYMBOLS = (X1, X2, X3)


# --------------------------------------------------------------------------
# Laurent polynomials


@dataclass(frozen=True)
class LaurentPoly:
    """An integer Laurent polynomial in x1, x2, x3; zero coefficients are never stored."""

    terms: tuple[tuple[Exponent, int], ...] = ()

    @classmethod
    def from_dict(cls, data: Mapping[Exponent, int]) -> LaurentPoly:
        return cls(tuple(sorted((e, int(c)) for e, c in data.items() if c != 0)))

    @classmethod
    def variable(cls, i: int) -> LaurentPoly:
        exponent = [0, 0, 0]
        exponent[i - 1] = 1
        return cls.monomial((exponent[0], exponent[1], exponent[2]))

    @classmethod
    def monomial(cls, exponent: Exponent, coeff: int = 1) -> LaurentPoly:
        return cls.from_dict({exponent: coeff})

    @classmethod
    def constant(cls, value: int) -> LaurentPoly:
        return cls.monomial((0, 0, 0), value)

    def as_dict(self) -> dict[Exponent, int]:
        return dict(self.terms)

    @property
    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def __add__(self, other: LaurentPoly) -> LaurentPoly:
        acc: dict[Exponent, int] = defaultdict(int, self.as_dict())
        for e, c in other.terms:
            acc[e] += c
        return LaurentPoly.from_dict(acc)

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly(tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other: LaurentPoly) -> LaurentPoly:
        return self + (-other)

    def __mul__(self, other: LaurentPoly) -> LaurentPoly:
        acc: dict[Exponent, int] = defaultdict(int)
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                acc[(e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])] += c1 * c2
        return LaurentPoly.from_dict(acc)

    def __pow__(self, k: int) -> LaurentPoly:
        if k < 0:
            raise InvalidParameterError("negative powers are only defined for monomials")
        result = LaurentPoly.constant(1)
        for _ in range(k):
            result = result * self
        return result

    def shift(self, exponent: Exponent) -> LaurentPoly:
        """Multiply by the monomial x^exponent."""
        return LaurentPoly(
            tuple(((e[0] + exponent[0], e[1] + exponent[1], e[2] + exponent[2]), c) for e, c in self.terms)
        )

    def exact_div(self, other: LaurentPoly) -> LaurentPoly:
        """Divide exactly; the quotient must again be a Laurent polynomial.

        Raises:
            InternalError: If the division leaves a non-monomial denominator.
        """
        if not other.terms:
            raise InternalError("division by the zero polynomial")
        if other.is_monomial:
            (e, c), = other.terms
            if all(coeff % c == 0 for _, coeff in self.terms):
                return LaurentPoly(tuple((x, coeff // c) for x, coeff in self.shift((-e[0], -e[1], -e[2])).terms))
        numer, denom = fraction(cancel(self.to_expr() / other.to_expr()))
        denominator = Poly(denom, *SYMBOLS)
        if len(denominator.terms()) != 1:
            raise InternalError(f"{self} is not divisible by {other}")
        (exponent, coeff), = denominator.terms()
        quotient = LaurentPoly.from_expr(numer)
        if any(c % int(coeff) for _, c in quotient.terms):
            raise InternalError(f"{self} is not divisible by {other}")
        scaled = LaurentPoly(tuple((e, c // int(coeff)) for e, c in quotient.terms))
        return scaled.shift((-exponent[0], -exponent[1], -exponent[2]))

    def evaluate(self, point: Sequence[Any] = (1, 1, 1)) -> Any:
        """Evaluate exactly; integer points with unit entries give integers."""
        total = sympy.Integer(0)
        for e, c in self.terms:
            term = sympy.Integer(c)
            for value, k in zip(point, e):
                term *= sympy.Rational(value) ** k
            total += term
        return int(total) if total.is_integer else total

    def to_expr(self) -> sympy.Expr:
        return sum(
            (c * X1 ** e[0] * X2 ** e[1] * X3 ** e[2] for e, c in self.terms),
            sympy.Integer(0),
        )

    @classmethod
    def from_expr(cls, expr: sympy.Expr) -> LaurentPoly:
        """Read a polynomial expression in x1, x2, x3 with integer coefficients."""
        data: dict[Exponent, int] = {}
        for exponent, coeff in Poly(sympy.expand(expr), *SYMBOLS).terms():
            if not coeff.is_integer:
                raise InternalError(f"non-integer coefficient {coeff}")
            data[(exponent[0], exponent[1], exponent[2])] = int(coeff)
        return cls.from_dict(data)

    def __str__(self) -> str:
        return str(self.to_expr()) if self.terms else "0"


# --------------------------------------------------------------------------
# Successor-closed subsets of string diagrams


Orientation = Sequence[bool]


def _orientations(w: Union[StringWord, Orientation]) -> tuple[bool, ...]:
    """Inverse flags of the letters; only the arrow directions matter for m."""
    if isinstance(w, StringWord):
        return tuple(c.inverse for c in w.letters)
    return tuple(bool(x) for x in w)


def _closed(bits: Sequence[int], flags: Sequence[bool]) -> bool:
    for k, inverse in enumerate(flags):
        left, right = bits[k], bits[k + 1]
        if not inverse and left and not right:
            return False
        if inverse and right and not left:
            return False
    return True


def m_subsets(w: Union[StringWord, Orientation]) -> int:
    """Count successor-closed vertex subsets of the diagram by brute force.

    Raises:
        InvalidParameterError: If the word is longer than the enumeration limit.
    """
    flags = _orientations(w)
    if len(flags) > SUBSET_LIMIT:
        raise InvalidParameterError(
            f"word of length {len(flags)} is too long for enumeration; use m_dp"
        )
    return sum(1 for bits in product((0, 1), repeat=len(flags) + 1) if _closed(bits, flags))


def m_dp(w: Union[StringWord, Orientation]) -> int:
    """Count successor-closed subsets with one boundary state per position."""
    out, inside = 1, 1
    for inverse in _orientations(w):
        if inverse:
            # y_k → y_{k-1}: y_k inside forces y_{k-1} inside
            out, inside = out + inside, inside
        else:
            out, inside = out, out + inside
    return out + inside


def graded_counts(w: StringWord) -> dict[Exponent, int]:
    """Return N_e: successor-closed subsets by dimension vector."""
    verts = w.vertices()

    def bump(table: Mapping[Exponent, int], vertex: int) -> dict[Exponent, int]:
        moved: dict[Exponent, int] = {}
        for e, c in table.items():
            v = list(e)
            v[vertex - 1] += 1
            moved[(v[0], v[1], v[2])] = c
        return moved

    def merge(*tables: Mapping[Exponent, int]) -> dict[Exponent, int]:
        acc: dict[Exponent, int] = defaultdict(int)
        for table in tables:
            for e, c in table.items():
                acc[e] += c
        return dict(acc)

    out: dict[Exponent, int] = {(0, 0, 0): 1}
    inside = bump(out, verts[0])
    for k, letter in enumerate(w.letters, start=1):
        if letter.inverse:
            out, inside = merge(out, inside), bump(inside, verts[k])
        else:
            out, inside = out, bump(merge(out, inside), verts[k])
    return merge(out, inside)


@lru_cache(maxsize=None)
def _m_entries(entries: tuple[int, ...]) -> int:
    if len(entries) == 1:
        return fibonacci(2 * entries[0] + 3)
    return _split(entries, 1)


def _split(entries: tuple[int, ...], i: int) -> int:
    left, right = entries[:i], entries[i:]
    left_minus = left[:-1] + (left[-1] - 1,)
    right_minus = (right[0] - 1,) + right[1:]
    return _m_entries(left) * _m_entries(right) + _m_entries(left_minus) * _m_entries(right_minus)


def m_recurrence(s: Union[SeqForm, Sequence[int]], split: Optional[int] = None) -> int:
    """Compute m by the splitting recurrence; ``split`` picks the top-level cut.

    Raises:
        InvalidInputError: For band sequences.
        InvalidParameterError: If ``split`` is not in 1..n−1.
    """
    if isinstance(s, SeqForm):
        if s.is_band:
            raise InvalidInputError("Markov numbers are defined for strings")
        entries = s.entries
    else:
        entries = tuple(s)
    if split is None or len(entries) == 1:
        if split is not None:
            raise InvalidParameterError("a single entry cannot be split")
        return _m_entries(entries)
    if not 1 <= split < len(entries):
        raise InvalidParameterError(f"split must lie in 1..{len(entries) - 1}")
    return _split(entries, split)


def markov_bounds(s: SeqForm) -> tuple[int, int]:
    """Return the Fibonacci bounds m((Σa+⌈n/2⌉−1)) and m((Σa+n−1))."""
    n, total = len(s.entries), sum(s.entries)
    lower = total + (n + 1) // 2 - 1
    upper = total + n - 1
    return fibonacci(2 * lower + 3), fibonacci(2 * upper + 3)


# --------------------------------------------------------------------------
# Exchange matrices, seeds and Caldero-Chapoton functions


@dataclass(frozen=True)
class ExchangeMatrix:
    rows: tuple[tuple[int, int, int], ...]

    @classmethod
    def initial(cls) -> ExchangeMatrix:
        return cls(((0, -2, 2), (2, 0, -2), (-2, 2, 0)))

    def entry(self, i: int, j: int) -> int:
        return self.rows[i][j]

    @property
    def is_skew_symmetric(self) -> bool:
        return all(self.rows[i][j] == -self.rows[j][i] for i in range(3) for j in range(3))

    def mutate(self, k: int) -> ExchangeMatrix:
        """Matrix mutation at the 1-based index ``k``."""
        _check_index(k)
        k -= 1
        b = self.rows
        new = []
        for i in range(3):
            row = []
            for j in range(3):
                if i == k or j == k:
                    row.append(-b[i][j])
                else:
                    row.append(b[i][j] + (abs(b[i][k]) * b[k][j] + b[i][k] * abs(b[k][j])) // 2)
            new.append((row[0], row[1], row[2]))
        return ExchangeMatrix(tuple(new))


def _check_index(k: int) -> None:
    if k not in (1, 2, 3):
        raise InvalidParameterError(f"mutation index must be 1, 2 or 3, got {k}")


@dataclass(frozen=True)
class Seed:
    matrix: ExchangeMatrix
    variables: tuple[LaurentPoly, LaurentPoly, LaurentPoly]

    @classmethod
    def initial(cls) -> Seed:
        return cls(
            ExchangeMatrix.initial(),
            (LaurentPoly.variable(1), LaurentPoly.variable(2), LaurentPoly.variable(3)),
        )

    def evaluate(self, point: Sequence[Any] = (1, 1, 1)) -> tuple[Any, ...]:
        return tuple(x.evaluate(point) for x in self.variables)


def mutate_seed(seed: Seed, k: int) -> Seed:
    """Mutate at ``k``: x_k′ = (Π x_i^[b_ik]₊ + Π x_i^[−b_ik]₊) / x_k."""
    _check_index(k)
    b = seed.matrix
    plus = LaurentPoly.constant(1)
    minus = LaurentPoly.constant(1)
    for i in range(3):
        coeff = b.entry(i, k - 1)
        if coeff > 0:
            plus = plus * seed.variables[i] ** coeff
        elif coeff < 0:
            minus = minus * seed.variables[i] ** (-coeff)
    fresh = (plus + minus).exact_div(seed.variables[k - 1])
    variables = list(seed.variables)
    variables[k - 1] = fresh
    return Seed(b.mutate(k), (variables[0], variables[1], variables[2]))


def _be(e: Exponent) -> Exponent:
    rows = ExchangeMatrix.initial().rows
    out = [sum(rows[i][j] * e[j] for j in range(3)) for i in range(3)]
    return (out[0], out[1], out[2])


def cc_function(component: Union[ComponentRecord, SeqForm, NegativeSimple]) -> LaurentPoly:
    """Return x^g · Σ_e N_e x^{B e} for a rigid string or negative simple.

    Raises:
        UnsupportedError: For bands and τ-shifted components.
    """
    kind = getattr(component, "kind", None)
    if kind is not None:
        if kind not in ("rigid_string", "neg_simple"):
            raise UnsupportedError(f"no Caldero-Chapoton function for kind {kind}")
        component = component.component  # type: ignore[union-attr]
    if isinstance(component, NegativeSimple):
        return LaurentPoly.variable(component.vertex)
    if component.is_band:
        raise UnsupportedError("Caldero-Chapoton functions of bands are not computed")
    g = g_formula("rigid_string", component)
    assert g is not None
    word = seq_to_word(component)
    assert isinstance(word, StringWord)
    acc: dict[Exponent, int] = defaultdict(int)
    for e, count in graded_counts(word).items():
        be = _be(e)
        acc[(g.g[0] + be[0], g.g[1] + be[1], g.g[2] + be[2])] += count
    return LaurentPoly.from_dict(acc)


# --------------------------------------------------------------------------
# Markov triples


@dataclass(frozen=True)
class MarkovTriple:
    a: int
    b: int
    c: int

    def __post_init__(self) -> None:
        a, b, c = self.a, self.b, self.c
        if min(a, b, c) < 1 or a * a + b * b + c * c != 3 * a * b * c:
            raise InvalidInputError(f"({a},{b},{c}) is not a Markov triple")

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def __str__(self) -> str:
        return f"({self.a},{self.b},{self.c})"


def triple_mutate(t: MarkovTriple, k: int) -> MarkovTriple:
    """Replace the k-th entry by three times the product of the others minus itself."""
    _check_index(k)
    values = list(t.as_tuple())
    others = [values[i] for i in range(3) if i != k - 1]
    values[k - 1] = 3 * others[0] * others[1] - values[k - 1]
    return MarkovTriple(values[0], values[1], values[2])


def triple_tree(depth: int) -> nx.DiGraph:
    """Mutation tree from (1,1,1); nodes are mutation paths, edges carry the index."""
    if depth < 0:
        raise InvalidParameterError("depth must be non-negative")
    tree = nx.DiGraph()
    root: tuple[int, ...] = ()
    tree.add_node(root, triple=MarkovTriple(1, 1, 1))
    frontier = [root]
    for _ in range(depth):
        next_frontier = []
        for path in frontier:
            for k in (1, 2, 3):
                if path and path[-1] == k:
                    continue
                child = path + (k,)
                tree.add_node(child, triple=triple_mutate(tree.nodes[path]["triple"], k))
                tree.add_edge(path, child, k=k)
                next_frontier.append(child)
        frontier = next_frontier
    return tree


# --------------------------------------------------------------------------
# Collision scan


@dataclass(frozen=True)
class Collision:
    value: int
    sequences: tuple[tuple[int, ...], ...]


def _scan_shard(shard: Iterable[tuple[int, ...]]) -> list[tuple[int, tuple[int, ...]]]:
    return [(_m_entries(entries), entries) for entries in shard]


def collision_scan(max_n: int, max_a: int, threads: int = 1) -> list[Collision]:
    """Compute m for every rigid sequence within bounds and report equal values.

    m does not depend on x₁, so sequences are compared by their entries alone.
    """
    corpus: list[tuple[int, ...]] = [(0,)]
    for a in range(1, max_a + 1):
        corpus.extend(rigid_entries(max_n, a))
    shards = [corpus[i::threads] for i in range(threads)]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = [item for part in pool.map(_scan_shard, shards) for item in part]
    else:
        results = _scan_shard(corpus)
    by_value: dict[int, set[tuple[int, ...]]] = defaultdict(set)
    for value, entries in results:
        by_value[value].add(entries)
    collisions = [
        Collision(value, tuple(sorted(seqs)))
        for value, seqs in sorted(by_value.items())
        if len(seqs) > 1
    ]
    for c in collisions:
        logger.warning("Markov number %s is shared by %s", c.value, c.sequences)
    logger.info("scanned %d sequences, %d collisions", len(corpus), len(collisions))
    return collisions


# --------------------------------------------------------------------------
# Graph and seed mutation in lockstep


@dataclass(frozen=True)
class WalkStep:
    path: tuple[int, ...]
    cluster: tuple[str, str, str]
    values: tuple[int, int, int]
    triple: MarkovTriple
    matches: bool


def synchronous_walk(depth: int) -> list[WalkStep]:
    """Mutate the component cluster and the seed along every path of length ≤ depth.

    A step matches when the Caldero-Chapoton function of the new component
    equals the new cluster variable and the evaluation at (1,1,1) equals the
    Markov triple reached along the same path.
    """
    from .component_graph import complete_cluster, component_of, negative_code
    from .strings_bands import format_psi

    start = (negative_code(1), negative_code(2), negative_code(3))
    steps: list[WalkStep] = []
    frontier = [((), start, Seed.initial(), MarkovTriple(1, 1, 1))]
    for _ in range(depth):
        next_frontier = []
        for path, cluster, seed, triple in frontier:
            for k in (1, 2, 3):
                if path and path[-1] == k:
                    continue
                others = tuple(c for i, c in enumerate(cluster) if i != k - 1)
                current = component_of(cluster[k - 1])
                first, second = complete_cluster(others[0], others[1])
                if current not in (component_of(first), component_of(second)):
                    raise InternalError(
                        f"walk {path}: no completion of the other two components"
                        f" gives back {format_psi(cluster[k - 1])}"
                    )
                fresh = second if component_of(first) == current else first
                codes = list(cluster)
                codes[k - 1] = fresh
                new_cluster = (codes[0], codes[1], codes[2])
                new_seed = mutate_seed(seed, k)
                new_triple = triple_mutate(triple, k)
                values = new_seed.evaluate()
                matches = (
                    cc_function(component_of(fresh)) == new_seed.variables[k - 1]
                    and values == new_triple.as_tuple()
                )
                if not matches:
                    logger.warning("walk %s: mutation at %d disagrees", path, k)
                child = path + (k,)
                steps.append(
                    WalkStep(
                        child,
                        (format_psi(codes[0]), format_psi(codes[1]), format_psi(codes[2])),
                        (values[0], values[1], values[2]),
                        new_triple,
                        matches,
                    )
                )
                next_frontier.append((child, new_cluster, new_seed, new_triple))
        frontier = next_frontier
    return steps
