"""The Markov quiver, its Jacobian relations and the truncated algebras Λ_p.

Arrows are α₁,α₂: 1→2, β₁,β₂: 2→3 and γ₁,γ₂: 3→1. Paths are stored in
traversal order (first arrow first). The six length-2 relations come from the
cyclic derivatives of W = γ₁β₁α₁ + γ₂β₂α₂; every relation-free directed path
walks the six-cycle α₁→β₂→γ₁→α₂→β₁→γ₂→α₁.

Representations are explicit: one sparse ``DomainMatrix`` per arrow over QQ or
a prime field. The helpers at the bottom of this module are the only place
that talks to sympy's matrix layer directly.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable, Mapping, Optional, Sequence

from sympy.polys.domains import GF, QQ
from sympy.polys.matrices import DomainMatrix

from common.errors import InvalidInputError, TruncationTooSmallError

logger = logging.getLogger(__name__)

VERTICES = (1, 2, 3)

# Mersenne primes for the prime-field fast path.
PRIME_MODULI = (2**61 - 1, 2**31 - 1)


class Arrow(Enum):
    """An arrow of the Markov quiver."""

    A1 = ("a1", "α₁", 1, 2)
    A2 = ("a2", "α₂", 1, 2)
    B1 = ("b1", "β₁", 2, 3)
    B2 = ("b2", "β₂", 2, 3)
    G1 = ("g1", "γ₁", 3, 1)
    G2 = ("g2", "γ₂", 3, 1)

    def __init__(self, label: str, symbol: str, source: int, target: int) -> None:
        self.label = label
        self.symbol = symbol
        self.source = source
        self.target = target

    @property
    def order(self) -> int:
        """Position in the fixed order α₁<α₂<β₁<β₂<γ₁<γ₂."""
        return ARROWS.index(self)

    @property
    def index(self) -> int:
        """Return 1 or 2, the subscript of the arrow."""
        return int(self.label[1])

    @property
    def greek(self) -> str:
        """Return the Greek letter class: 'a', 'b' or 'g'."""
        return self.label[0]

    @property
    def parallel(self) -> Arrow:
        """The other arrow with the same source and target."""
        return PARALLEL[self]

    def __lt__(self, other: Arrow) -> bool:
        return self.order < other.order

    def __repr__(self) -> str:
        return self.symbol


ARROWS: tuple[Arrow, ...] = tuple(Arrow)

PARALLEL: dict[Arrow, Arrow] = {
    Arrow.A1: Arrow.A2,
    Arrow.A2: Arrow.A1,
    Arrow.B1: Arrow.B2,
    Arrow.B2: Arrow.B1,
    Arrow.G1: Arrow.G2,
    Arrow.G2: Arrow.G1,
}

# (first, then) pairs; (B1, G1) is γ₁β₁ in composition order.
RELATIONS: tuple[tuple[Arrow, Arrow], ...] = (
    (Arrow.B1, Arrow.G1),
    (Arrow.G1, Arrow.A1),
    (Arrow.A1, Arrow.B1),
    (Arrow.B2, Arrow.G2),
    (Arrow.G2, Arrow.A2),
    (Arrow.A2, Arrow.B2),
)

# The unique arrow that may follow a given arrow in a nonzero path.
NEXT: dict[Arrow, Arrow] = {
    Arrow.A1: Arrow.B2,
    Arrow.B2: Arrow.G1,
    Arrow.G1: Arrow.A2,
    Arrow.A2: Arrow.B1,
    Arrow.B1: Arrow.G2,
    Arrow.G2: Arrow.A1,
}
PREV: dict[Arrow, Arrow] = {after: before for before, after in NEXT.items()}


def arrow_from_label(label: str) -> Arrow:
    """Look up an arrow by its ASCII label such as ``"b2"``."""
    for arrow in ARROWS:
        if arrow.label == label:
            return arrow
    raise InvalidInputError(f"unknown arrow {label!r}")


def arrows_between(source: int, target: int) -> tuple[Arrow, Arrow]:
    """Return the two parallel arrows source→target, index 1 first."""
    found = tuple(a for a in ARROWS if a.source == source and a.target == target)
    if len(found) != 2:
        raise InvalidInputError(f"no arrows {source}→{target}")
    return found[0], found[1]


def jacobian_relations() -> list[tuple[Arrow, Arrow]]:
    """Return the six length-2 relations as (first, then) pairs."""
    return list(RELATIONS)


def is_relation(first: Arrow, then: Arrow) -> bool:
    """Return whether traversing ``first`` then ``then`` is a relation."""
    return (first, then) in RELATIONS


@dataclass(frozen=True, order=True)
class Path:
    """A relation-free directed path, stored in traversal order."""

    start: int
    arrows: tuple[Arrow, ...] = ()

    def __post_init__(self) -> None:
        vertex = self.start
        for a, b in zip(self.arrows, self.arrows[1:]):
            if a.target != b.source or is_relation(a, b):
                raise InvalidInputError(f"not a path: {self.arrows!r}")
        if self.arrows and self.arrows[0].source != vertex:
            raise InvalidInputError("path does not start at its base vertex")

    @property
    def end(self) -> int:
        return self.arrows[-1].target if self.arrows else self.start

    def __len__(self) -> int:
        return len(self.arrows)

    def sort_key(self) -> tuple[int, tuple[int, ...], int]:
        return (len(self.arrows), tuple(a.order for a in self.arrows), self.start)

    def __str__(self) -> str:
        if not self.arrows:
            return f"e{self.start}"
        # composition order, last arrow leftmost
        return "".join(a.symbol for a in reversed(self.arrows))


def _check_truncation(p: int) -> None:
    if p < 2:
        raise TruncationTooSmallError(f"truncation level must be at least 2, got {p}")


def path_basis(p: int) -> list[Path]:
    """Return all nonzero paths of Λ_p ordered by length, then by arrow names."""
    _check_truncation(p)
    paths = [Path(v) for v in VERTICES]
    layer = [Path(a.source, (a,)) for a in ARROWS]
    while layer and len(layer[0]) < p:
        paths.extend(layer)
        layer = [Path(q.start, q.arrows + (NEXT[q.arrows[-1]],)) for q in layer]
    return sorted(paths, key=Path.sort_key)


@dataclass(frozen=True)
class TruncatedAlgebra:
    """The truncation Λ_p of the Jacobian algebra."""

    p: int
    relation_set: tuple[tuple[Arrow, Arrow], ...] = RELATIONS
    path_basis: tuple[Path, ...] = field(default=(), compare=False)

    @classmethod
    def of(cls, p: int) -> TruncatedAlgebra:
        return cls(p=p, path_basis=tuple(path_basis(p)))

    @property
    def dimension(self) -> int:
        return len(self.path_basis)


# --------------------------------------------------------------------------
# Explicit representations


@dataclass(frozen=True)
class ExplicitRep:
    """A representation given by a dimension vector and six arrow matrices.

    ``mats[α]`` has shape ``(dims[t(α)], dims[s(α)])`` and acts on column
    vectors. ``decoration`` is the V-vector of a decorated representation.
    """

    dims: tuple[int, int, int]
    mats: Mapping[Arrow, DomainMatrix]
    decoration: tuple[int, int, int] = (0, 0, 0)
    domain: Any = QQ

    def __post_init__(self) -> None:
        for arrow in ARROWS:
            mat = self.mats.get(arrow)
            if mat is None:
                raise InvalidInputError(f"missing matrix for {arrow!r}")
            expected = (self.dim_at(arrow.target), self.dim_at(arrow.source))
            if mat.shape != expected:
                raise InvalidInputError(
                    f"matrix of {arrow!r} has shape {mat.shape}, expected {expected}"
                )
            if mat.domain != self.domain:
                raise InvalidInputError("all matrices must share the field")
        if not self.satisfies_relations():
            raise InvalidInputError("the matrices violate a zero relation")
        nil(self)

    def dim_at(self, vertex: int) -> int:
        return self.dims[vertex - 1]

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def path_matrix(self, arrows: Sequence[Arrow]) -> DomainMatrix:
        """Return the matrix of a path given in traversal order."""
        if not arrows:
            raise InvalidInputError("use identity for trivial paths")
        result = self.mats[arrows[0]]
        for arrow in arrows[1:]:
            result = self.mats[arrow].matmul(result)
        return result

    def satisfies_relations(self) -> bool:
        return all(is_zero_matrix(self.path_matrix(rel)) for rel in RELATIONS)

    def convert(self, domain: Any) -> ExplicitRep:
        """Return the same representation over another field."""
        if domain == self.domain:
            return self
        mats = {a: convert_matrix(m, self.domain, domain) for a, m in self.mats.items()}
        return ExplicitRep(self.dims, mats, self.decoration, domain)

    def with_decoration(self, decoration: tuple[int, int, int]) -> ExplicitRep:
        return ExplicitRep(self.dims, self.mats, decoration, self.domain)


def zero_rep(domain: Any = QQ, decoration: tuple[int, int, int] = (0, 0, 0)) -> ExplicitRep:
    """Return the zero representation, optionally decorated."""
    mats = {a: sparse_matrix({}, (0, 0), domain) for a in ARROWS}
    return ExplicitRep((0, 0, 0), mats, decoration, domain)


def rep_from_entries(
    dims: Sequence[int],
    entries: Mapping[Arrow, Mapping[tuple[int, int], Any]],
    domain: Any = QQ,
) -> ExplicitRep:
    """Assemble an ExplicitRep from per-arrow ``{(row, col): value}`` maps."""
    d = (int(dims[0]), int(dims[1]), int(dims[2]))
    mats = {
        a: sparse_matrix(entries.get(a, {}), (d[a.target - 1], d[a.source - 1]), domain)
        for a in ARROWS
    }
    return ExplicitRep(d, mats, (0, 0, 0), domain)


def nil(rep: ExplicitRep) -> int:
    """Return the smallest k such that every path of length k acts as zero."""
    if rep.is_zero():
        return 0
    # only NEXT-chains can act nonzero; one chain per starting arrow
    current = {a: rep.mats[a] for a in ARROWS}
    last = {a: a for a in ARROWS}
    k = 1
    while True:
        if all(is_zero_matrix(m) for m in current.values()):
            return k
        if k > rep.total_dim:
            raise InvalidInputError("representation is not nilpotent")
        for start in ARROWS:
            nxt = NEXT[last[start]]
            current[start] = rep.mats[nxt].matmul(current[start])
            last[start] = nxt
        k += 1


def default_truncation(*reps: ExplicitRep, p: Optional[int] = None) -> int:
    """Return the truncation used by the oracles: nil+2 unless ``p`` is given.

    Raises:
        TruncationTooSmallError: If an explicit ``p`` does not exceed nil.
    """
    needed = max((nil(r) for r in reps), default=0)
    if p is None:
        return max(needed + 2, 2)
    if p <= needed or p < 2:
        raise TruncationTooSmallError(f"p={p} must exceed nil={needed}")
    return p


def _place(paths: Iterable[Path], vertex_of) -> tuple[dict[Path, tuple[int, int]], list[int]]:
    index: dict[Path, tuple[int, int]] = {}
    dims = [0, 0, 0]
    for q in sorted(paths, key=Path.sort_key):
        v = vertex_of(q)
        index[q] = (v, dims[v - 1])
        dims[v - 1] += 1
    return index, dims


def injective(i: int, p: int, domain: Any = QQ) -> ExplicitRep:
    """Return the indecomposable injective Λ_p-module at vertex ``i``.

    Its basis is dual to the paths ending at ``i``; the functional of a path
    q sits at the start of q, and an arrow α sends q = α·q' to q'.
    """
    _check_truncation(p)
    paths = [q for q in path_basis(p) if q.end == i]
    index, dims = _place(paths, lambda q: q.start)
    entries: dict[Arrow, dict[tuple[int, int], int]] = {a: {} for a in ARROWS}
    for q, (_, col) in index.items():
        if not q.arrows:
            continue
        alpha = q.arrows[0]
        rest = Path(alpha.target, q.arrows[1:])
        row = index[rest][1]
        entries[alpha][(row, col)] = 1
    return rep_from_entries(dims, entries, domain)


def projective(i: int, p: int, domain: Any = QQ) -> ExplicitRep:
    """Return the indecomposable projective Λ_p-module at vertex ``i``."""
    _check_truncation(p)
    paths = [q for q in path_basis(p) if q.start == i]
    index, dims = _place(paths, lambda q: q.end)
    entries: dict[Arrow, dict[tuple[int, int], int]] = {a: {} for a in ARROWS}
    for q, (v, col) in index.items():
        for alpha in ARROWS:
            if alpha.source != v or len(q) + 1 >= p:
                continue
            if q.arrows and is_relation(q.arrows[-1], alpha):
                continue
            extended = Path(q.start, q.arrows + (alpha,))
            entries[alpha][(index[extended][1], col)] = 1
    return rep_from_entries(dims, entries, domain)


def socle_dims(rep: ExplicitRep) -> tuple[int, int, int]:
    """Return the dimension vector of the socle (common kernel of outgoing arrows)."""
    out: list[int] = []
    for v in VERTICES:
        n = rep.dim_at(v)
        outgoing = [rep.mats[a] for a in ARROWS if a.source == v]
        stacked = stack_rows(outgoing, n, rep.domain)
        out.append(n - stacked.rank() if n else 0)
    return (out[0], out[1], out[2])


# --------------------------------------------------------------------------
# Sparse exact matrices


def sparse_matrix(
    entries: Mapping[tuple[int, int], Any], shape: tuple[int, int], domain: Any
) -> DomainMatrix:
    """Build a sparse DomainMatrix from ``{(row, col): value}``, dropping zeros."""
    rows: dict[int, dict[int, Any]] = {}
    for (r, c), value in entries.items():
        element = domain.convert(value)
        if not domain.is_zero(element):
            rows.setdefault(r, {})[c] = element
    return DomainMatrix(rows, shape, domain)


def matrix_entries(mat: DomainMatrix) -> dict[tuple[int, int], Any]:
    """Return the nonzero entries of a matrix as ``{(row, col): value}``."""
    zero = mat.domain.zero
    out: dict[tuple[int, int], Any] = {}
    for r, row in enumerate(mat.to_list()):
        for c, value in enumerate(row):
            if value != zero:
                out[(r, c)] = value
    return out


def is_zero_matrix(mat: DomainMatrix) -> bool:
    rows, cols = mat.shape
    if rows == 0 or cols == 0:
        return True
    return not matrix_entries(mat)


def convert_matrix(mat: DomainMatrix, source: Any, target: Any) -> DomainMatrix:
    """Convert an integral matrix between QQ and a prime field."""
    converted = {}
    for key, value in matrix_entries(mat).items():
        rational = source.to_sympy(value)
        if target != QQ and not rational.is_Integer:
            raise InvalidInputError("only integral matrices move to a prime field")
        converted[key] = target.from_sympy(rational)
    return sparse_matrix(converted, mat.shape, target)


def stack_rows(mats: Sequence[DomainMatrix], ncols: int, domain: Any) -> DomainMatrix:
    """Stack matrices with ``ncols`` columns on top of each other."""
    entries: dict[tuple[int, int], Any] = {}
    offset = 0
    for mat in mats:
        for (r, c), value in matrix_entries(mat).items():
            entries[(offset + r, c)] = value
        offset += mat.shape[0]
    return sparse_matrix(entries, (offset, ncols), domain)


def nullspace(mat: DomainMatrix) -> list[list[Any]]:
    """Return a basis of the right kernel, one list per vector."""
    rows, cols = mat.shape
    domain = mat.domain
    if cols == 0:
        return []
    if rows == 0:
        return [[domain.one if j == i else domain.zero for j in range(cols)] for i in range(cols)]
    reduced, pivots = mat.rref()
    table = reduced.to_list()
    pivot_rows = {col: r for r, col in enumerate(pivots)}
    basis = []
    for free in range(cols):
        if free in pivot_rows:
            continue
        vector = [domain.zero] * cols
        vector[free] = domain.one
        for col, r in pivot_rows.items():
            vector[col] = -table[r][free]
        basis.append(vector)
    return basis


def rank_of(entries: Mapping[tuple[int, int], Any], shape: tuple[int, int], kind: str = "rational") -> int:
    """Rank of a system given by entries, over QQ or via the prime fast path.

    The prime path computes the rank modulo two Mersenne primes; if they
    disagree the rank is recomputed over QQ.
    """
    if shape[0] == 0 or shape[1] == 0:
        return 0
    if kind == "rational":
        return sparse_matrix(entries, shape, QQ).rank()
    if kind != "prime":
        raise InvalidInputError(f"unknown field {kind!r}")
    ranks = []
    for q in PRIME_MODULI:
        domain = GF(q)
        reduced = {key: _to_prime(value, domain) for key, value in entries.items()}
        ranks.append(sparse_matrix(reduced, shape, domain).rank())
    if ranks[0] != ranks[1]:
        logger.warning("prime ranks disagree (%s); recomputing over QQ", ranks)
        return sparse_matrix(entries, shape, QQ).rank()
    return ranks[0]


def require_same_domain(*reps: ExplicitRep) -> Any:
    domains = {r.domain for r in reps}
    if len(domains) != 1:
        raise InvalidInputError("representations live over different fields")
    return domains.pop()


def _to_prime(value: Any, domain: Any) -> Any:
    if isinstance(value, int):
        return domain.convert(value)
    rational = QQ.to_sympy(QQ.convert(value))
    return domain.convert(int(rational.p)) / domain.convert(int(rational.q))
