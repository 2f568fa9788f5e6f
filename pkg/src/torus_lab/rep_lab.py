"""Exact homological oracles over the truncations Λ_p.

Hom spaces are solved as linear systems, Auslander-Reiten translates of
string modules follow the hook/cohook rule, and g-vectors are read from an
explicit minimal injective copresentation.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Optional, Union

from sympy.polys.domains import QQ

from common.errors import (
    InvalidInputError,
    TruncationTooSmallError,
    UnsupportedError,
)

from .algebra_core import (
    ARROWS,
    NEXT,
    PREV,
    VERTICES,
    Arrow,
    ExplicitRep,
    default_truncation,
    is_relation,
    matrix_entries,
    nil,
    nullspace,
    path_basis,
    rank_of,
    require_same_domain,
    sparse_matrix,
    zero_rep,
)
from .classification import unit
from .strings_bands import (
    SIDES,
    BandWord,
    Letter,
    NegativeSimple,
    SeqForm,
    StringWord,
    Word,
    band_module,
    seq_to_word,
    string_module,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DecoratedRep:
    """A decorated representation (M, V), remembering the word it came from."""

    module: ExplicitRep
    v: tuple[int, int, int] = (0, 0, 0)
    word: Optional[Word] = None
    lam: Any = 1

    @property
    def is_band(self) -> bool:
        return isinstance(self.word, BandWord)


def decorated(s: Union[SeqForm, NegativeSimple], lam: Any = 1, domain: Any = QQ) -> DecoratedRep:
    """Return the decorated representation of a sequence form or a negative simple."""
    if isinstance(s, NegativeSimple):
        return DecoratedRep(zero_rep(domain), unit(s.vertex))
    word = seq_to_word(s)
    if isinstance(word, BandWord):
        return DecoratedRep(band_module(word, lam, 1, domain), word=word, lam=lam)
    return DecoratedRep(string_module(word, domain), word=word)


# --------------------------------------------------------------------------
# Hom


def hom_dim(m: ExplicitRep, n: ExplicitRep, field: str = "rational") -> int:
    """Return dim Hom(M, N) by solving f_t M_α = N_α f_s for all arrows.

    Raises:
        InvalidInputError: If the representations live over different fields.
    """
    domain = require_same_domain(m, n)
    offsets: dict[int, int] = {}
    total = 0
    for v in VERTICES:
        offsets[v] = total
        total += n.dim_at(v) * m.dim_at(v)
    if total == 0:
        return 0

    def var(v: int, r: int, c: int) -> int:
        return offsets[v] + r * m.dim_at(v) + c

    system: dict[tuple[int, int], Any] = {}
    rows = 0
    for alpha in ARROWS:
        s, t = alpha.source, alpha.target
        n_t, m_s = n.dim_at(t), m.dim_at(s)
        if n_t == 0 or m_s == 0:
            continue
        for (l, c), value in matrix_entries(m.mats[alpha]).items():
            for r in range(n_t):
                key = (rows + r * m_s + c, var(t, r, l))
                system[key] = system.get(key, domain.zero) + value
        for (r, l), value in matrix_entries(n.mats[alpha]).items():
            for c in range(m_s):
                key = (rows + r * m_s + c, var(s, l, c))
                system[key] = system.get(key, domain.zero) - value
        rows += n_t * m_s
    if domain == QQ:
        rank = rank_of(system, (rows, total), field)
    else:
        rank = sparse_matrix(system, (rows, total), domain).rank() if rows else 0
    return total - rank


def end_dim(m: ExplicitRep, field: str = "rational") -> int:
    return hom_dim(m, m, field)


# --------------------------------------------------------------------------
# Admissible pairs


@dataclass(frozen=True)
class AdmissiblePair:
    """A factor [i, j] of C matched with a sub-factor [i2, j2] of C′.

    ``flipped`` records that the factor of C′ is read backwards.
    """

    i: int
    j: int
    i2: int
    j2: int
    flipped: bool = False


def _quotient_ok(w: StringWord, i: int, j: int) -> bool:
    m = len(w)
    left = i == 0 or w.letters[i - 1].inverse
    right = j == m or not w.letters[j].inverse
    return left and right


def _sub_ok(w: StringWord, i: int, j: int) -> bool:
    m = len(w)
    left = i == 0 or not w.letters[i - 1].inverse
    right = j == m or w.letters[j].inverse
    return left and right


def admissible_pairs(c: StringWord, c2: StringWord) -> list[AdmissiblePair]:
    """Enumerate the admissible pairs; their number is dim Hom(M(C), M(C′))."""
    pairs: list[AdmissiblePair] = []
    verts, verts2 = c.vertices(), c2.vertices()
    m, m2 = len(c), len(c2)
    flipped_word = c2.inverse()
    for i in range(m + 1):
        for j in range(i, m + 1):
            if not _quotient_ok(c, i, j):
                continue
            factor = c.letters[i:j]
            for i2 in range(m2 + 1):
                j2 = i2 + (j - i)
                if j2 > m2:
                    break
                if factor == c2.letters[i2:j2] and verts[i] == verts2[i2] and _sub_ok(c2, i2, j2):
                    pairs.append(AdmissiblePair(i, j, i2, j2))
                if j == i:
                    continue
                # read C′ backwards; positions refer to the inverse word
                if factor == flipped_word.letters[i2:j2] and _sub_ok(flipped_word, i2, j2):
                    pairs.append(AdmissiblePair(i, j, m2 - j2, m2 - i2, True))
    return pairs


# --------------------------------------------------------------------------
# Auslander-Reiten translates (hooks and cohooks)


def _index1_into(vertex: int) -> Arrow:
    for side in SIDES:
        if not side.inverse and side.target == vertex:
            return side.arrow
    raise InvalidInputError(f"no arrow into {vertex}")


def _index1_out_of(vertex: int) -> Arrow:
    for side in SIDES:
        if not side.inverse and side.source == vertex:
            return side.arrow
    raise InvalidInputError(f"no arrow out of {vertex}")


def _trailing_run(letters: tuple[Letter, ...], inverse: bool) -> int:
    run = 0
    for c in reversed(letters):
        if c.inverse != inverse:
            break
        run += 1
    return run


def _hook_end(w: StringWord, p: int) -> Optional[StringWord]:
    """Add a hook at the end of w, or delete a cohook; None means zero."""
    letters = w.letters
    end = w.end
    beta: Optional[Arrow] = None
    if not letters:
        beta = _index1_into(end)
    else:
        last = letters[-1]
        for candidate in ARROWS:
            if candidate.target != end:
                continue
            if not last.inverse and candidate == last.arrow:
                continue
            if last.inverse:
                if is_relation(candidate, last.arrow):
                    continue
                if _trailing_run(letters, True) + 1 > p - 1:
                    continue
            beta = candidate
            break
    if beta is not None:
        extension = [Letter(beta, True)]
        arrow = beta.parallel
        for _ in range(p - 1):
            extension.append(Letter(arrow))
            arrow = NEXT[arrow]
        return StringWord(letters + tuple(extension), w.base)
    direct = [k for k, c in enumerate(letters) if not c.inverse]
    if not direct:
        return None
    cut = direct[-1]
    return StringWord(letters[:cut], w.base)


def _cohook_end(w: StringWord, p: int) -> Optional[StringWord]:
    """Add a cohook at the end of w, or delete a hook; None means zero."""
    letters = w.letters
    end = w.end
    gamma: Optional[Arrow] = None
    if not letters:
        gamma = _index1_out_of(end)
    else:
        last = letters[-1]
        for candidate in ARROWS:
            if candidate.source != end:
                continue
            if last.inverse and candidate == last.arrow:
                continue
            if not last.inverse:
                if is_relation(last.arrow, candidate):
                    continue
                if _trailing_run(letters, False) + 1 > p - 1:
                    continue
            gamma = candidate
            break
    if gamma is not None:
        extension = [Letter(gamma)]
        arrow = gamma.parallel
        for _ in range(p - 1):
            extension.append(Letter(arrow, True))
            arrow = PREV[arrow]
        return StringWord(letters + tuple(extension), w.base)
    inverse = [k for k, c in enumerate(letters) if c.inverse]
    if not inverse:
        return None
    cut = inverse[-1]
    return StringWord(letters[:cut], w.base)


def _both_sides(w: StringWord, p: int, step) -> Optional[StringWord]:
    once = step(w, p)
    if once is None:
        return None
    twice = step(once.inverse(), p)
    return None if twice is None else twice.inverse()


def coextend(w: StringWord, p: int) -> Optional[StringWord]:
    """τ⁻¹ over Λ_p for any Λ_p-string; None is the zero module."""
    if not w.is_lambda_p_string(p):
        raise TruncationTooSmallError(f"{w} is not a string over Λ_{p}")
    return _both_sides(w, p, _hook_end)


def tau_inverse(c: StringWord, p: int) -> Optional[StringWord]:
    """Return τ⁻¹C over Λ_p (None for zero).

    Raises:
        TruncationTooSmallError: If p ≤ length(C).
    """
    if p <= len(c):
        raise TruncationTooSmallError(f"p={p} must exceed the string length {len(c)}")
    return coextend(c, p)


def tau(c: StringWord, p: int) -> Optional[StringWord]:
    """Return τC over Λ_p (None for zero).

    Raises:
        TruncationTooSmallError: If C has a directed run of length ≥ p.
    """
    if not c.is_lambda_p_string(p):
        raise TruncationTooSmallError(f"{c} is not a string over Λ_{p}")
    return _both_sides(c, p, _cohook_end)


def same_string(u: Optional[StringWord], v: Optional[StringWord]) -> bool:
    """Equality up to inversion; None stands for zero."""
    if u is None or v is None:
        return u is v
    return u == v or u == v.inverse()


# --------------------------------------------------------------------------
# E-invariant and g-vectors


def _truncation(p: Optional[int], *reps: ExplicitRep) -> int:
    return default_truncation(*reps, p=p)


def e_invariant(
    m_dec: DecoratedRep, n_dec: DecoratedRep, p: Optional[int] = None, field: str = "rational"
) -> int:
    """Return E(M, N) = dim Hom(τ⁻¹N, M) + Σ dim V_N,i · dim M_i.

    Raises:
        TruncationTooSmallError: If an explicit p does not exceed nil.
        UnsupportedError: If N carries no word to translate.
    """
    m, n = m_dec.module, n_dec.module
    p = _truncation(p, m, n)
    decoration = sum(vi * di for vi, di in zip(n_dec.v, m.dims))
    if n.is_zero() or m.is_zero():
        return decoration
    if n_dec.word is None:
        raise UnsupportedError("E needs the string or band behind N")
    if isinstance(n_dec.word, BandWord):
        translate = n
    else:
        shifted = coextend(n_dec.word, p)
        if shifted is None:
            return decoration
        translate = string_module(shifted, m.domain)
    return hom_dim(translate, m, field) + decoration


def _socle_functionals(m: ExplicitRep, vertex: int) -> list[int]:
    """Coordinates whose functionals restrict to a basis of the dual socle at ``vertex``."""
    n = m.dim_at(vertex)
    if n == 0:
        return []
    outgoing = [a for a in ARROWS if a.source == vertex]
    entries: dict[tuple[int, int], Any] = {}
    offset = 0
    for a in outgoing:
        for (r, c), value in matrix_entries(m.mats[a]).items():
            entries[(offset + r, c)] = value
        offset += m.dim_at(a.target)
    stacked = sparse_matrix(entries, (offset, n), m.domain)
    basis = nullspace(stacked)
    if not basis:
        return []
    rows = {(r, c): value for r, vec in enumerate(basis) for c, value in enumerate(vec)}
    _, pivots = sparse_matrix(rows, (len(basis), n), m.domain).rref()
    return list(pivots)


def _path_rows(m: ExplicitRep, arrows: tuple[Arrow, ...], row: int) -> dict[int, Any]:
    """Row ``row`` of the path matrix of ``arrows`` (identity on the trivial path)."""
    if not arrows:
        return {row: m.domain.one}
    mat = m.path_matrix(arrows)
    return {c: value for (r, c), value in matrix_entries(mat).items() if r == row}


def g_vector_copresentation(m_dec: DecoratedRep, p: Optional[int] = None) -> tuple[int, int, int]:
    """Return g from a minimal injective copresentation 0 → M → I₀ → I₁."""
    m = m_dec.module
    if m.is_zero():
        return m_dec.v
    p = _truncation(p, m)
    domain = m.domain
    copies = [(i, j) for i in VERTICES for j in _socle_functionals(m, i)]
    socle = [sum(1 for i, _ in copies if i == v) for v in VERTICES]
    paths = path_basis(p)

    # I₀ coordinates per vertex: (copy index, path), in a fixed order
    coords: dict[int, list[tuple[int, Any]]] = {v: [] for v in VERTICES}
    for copy_index, (i, _) in enumerate(copies):
        for q in paths:
            if q.end == i:
                coords[q.start].append((copy_index, q))
    position = {v: {key: k for k, key in enumerate(coords[v])} for v in VERTICES}

    # the embedding f_k: M_k → I₀_k
    embed: dict[int, dict[tuple[int, int], Any]] = {v: {} for v in VERTICES}
    for v in VERTICES:
        for row, (copy_index, q) in enumerate(coords[v]):
            i, j = copies[copy_index]
            for col, value in _path_rows(m, q.arrows, j).items():
                embed[v][(row, col)] = value

    # arrow actions on I₀
    def action(alpha: Arrow) -> dict[tuple[int, int], Any]:
        out: dict[tuple[int, int], Any] = {}
        for col, (copy_index, q) in enumerate(coords[alpha.source]):
            if q.arrows and q.arrows[0] == alpha:
                rest = type(q)(alpha.target, q.arrows[1:])
                out[(position[alpha.target][(copy_index, rest)], col)] = domain.one
        return out

    g = []
    for k in VERTICES:
        size_k = len(coords[k])
        outgoing = [a for a in ARROWS if a.source == k]
        entries: dict[tuple[int, int], Any] = {}
        row0 = 0
        col0 = size_k
        for alpha in outgoing:
            t = alpha.target
            for (r, c), value in action(alpha).items():
                entries[(row0 + r, c)] = value
            for (r, c), value in embed[t].items():
                entries[(row0 + r, col0 + c)] = -value
            row0 += len(coords[t])
            col0 += m.dim_at(t)
        if size_k == 0:
            soc_coker = 0
        else:
            rank = sparse_matrix(entries, (row0, col0), domain).rank() if row0 else 0
            soc_coker = (col0 - rank) - m.dim_at(k)
        g.append(-socle[k - 1] + soc_coker + m_dec.v[k - 1])
    return (g[0], g[1], g[2])


def p_stable(m_dec: DecoratedRep, n_dec: Optional[DecoratedRep] = None) -> bool:
    """Check that E (or g when ``n_dec`` is None) agrees at p and p+1 for p = nil+2, nil+3."""
    reps = [m_dec.module] + ([n_dec.module] if n_dec else [])
    base = max(nil(r) for r in reps) + 2
    values = []
    for p in (base, base + 1, base + 2):
        if n_dec is None:
            values.append(g_vector_copresentation(m_dec, p))
        else:
            values.append(e_invariant(m_dec, n_dec, p))
    logger.debug("p-stability values %s", values)
    return all(v == values[0] for v in values)
