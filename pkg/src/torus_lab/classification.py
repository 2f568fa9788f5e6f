"""Combinatorial predicates on sequences and the closed-form g-vectors.

Patterns such as ``(s, a+1, …)`` are read with comma semantics: a pattern
``…, s, b …`` is an occurrence of the entries of ``s`` at some position
p ≥ 1 of the other sequence, followed by an entry equal to ``b``. All indices
below are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator, Optional, Sequence

from common.errors import InvalidInputError, NotABandError
from common.utils import is_proper_power

from .algebra_core import Arrow
from .strings_bands import (
    SIDES,
    Letter,
    NegativeSimple,
    SeqForm,
    band_representations,
    canonical,
    simple_representations,
    simple_seq,
)

Entries = Sequence[int]

KINDS = ("rigid_string", "band", "neg_simple", "tau_rigid", "injective_shift")


@dataclass(frozen=True)
class GVector:
    """An integer triple; rigid strings sum to 1, bands to 0, τ-shifts to −1."""

    g: tuple[int, int, int]

    @property
    def total(self) -> int:
        return sum(self.g)

    def __iter__(self) -> Iterator[int]:
        return iter(self.g)

    def __str__(self) -> str:
        return "(" + ",".join(str(x) for x in self.g) + ")"


def _occurrences(s: Entries, seq: Entries, *, start: int = 0, followed: bool = False) -> Iterator[int]:
    """Yield positions p ≥ start where ``s`` occurs in ``seq``.

    With ``followed`` only positions that leave an entry after the occurrence.
    """
    ls = len(s)
    stop = len(seq) - ls - (1 if followed else 0)
    target = tuple(s)
    for p in range(start, stop + 1):
        if tuple(seq[p : p + ls]) == target:
            yield p


def _windows(seq: Entries, flank: Optional[int] = None) -> Iterator[tuple[int, int, tuple[int, ...]]]:
    """Yield (i, t, s) with seq[i], s, seq[i+t] consecutive; optionally both flanks equal ``flank``."""
    n = len(seq)
    for i in range(n):
        for t in range(1, n - i):
            if flank is None or (seq[i] == flank and seq[i + t] == flank):
                yield i, t, tuple(seq[i + 1 : i + t])


# --------------------------------------------------------------------------
# Rigidity


def is_rigid_entries(c: Entries) -> bool:
    """Rigidity test on a plain entry list (n ≥ 1)."""
    n = len(c)
    if tuple(c) != tuple(reversed(c)):
        return False
    a = c[0]
    if any(x not in (a, a + 1) for x in c):
        return False
    for length in range(n):
        if c[length] != a + 1:
            continue
        prefix = c[:length]
        for p in _occurrences(prefix, c, start=1, followed=True):
            if c[p + length] == a:
                return False
    high = {s for _, _, s in _windows(c, a + 1)}
    low = {s for _, _, s in _windows(c, a)}
    return not (high & low)


def is_rigid(s: SeqForm) -> bool:
    """Return whether the string of ``s`` is E-rigid."""
    if s.is_band:
        raise InvalidInputError("is_rigid expects a string sequence")
    if s.entries == (0,):
        return True
    return is_rigid_entries(s.entries)


# --------------------------------------------------------------------------
# E(C', C) = 0


def _prefix_condition(c: Entries, c2: Entries) -> bool:
    n, m = len(c), len(c2)
    for length in range(n):
        ai = c[length]
        for p in _occurrences(c[:length], c2, start=1, followed=True):
            if p + length < m and ai > c2[p + length]:
                return False
    return True


def grund(c: Entries, c2: Entries) -> bool:
    """Return whether E(C′, C) = 0 for C=c, C′=c2 sharing a direct x₁."""
    n, m = len(c), len(c2)
    top = max(c)
    if any(x < top - 1 for x in c2):
        return False
    if not _prefix_condition(c, c2):
        return False
    if not _prefix_condition(list(reversed(c)), list(reversed(c2))):
        return False
    windows2: dict[tuple[int, tuple[int, ...]], list[int]] = {}
    for j, t, s in _windows(c2):
        windows2.setdefault((t, s), []).append(j)
    for i, t, s in _windows(c):
        for j in windows2.get((t, s), ()):
            if c[i] > c2[j] and c[i + t] > c2[j + t]:
                return False
    for p in _occurrences(c, c2):
        if p != 0 and p + n != m:
            return False
    return True


def e_vanishes(s_c: SeqForm, s_c2: SeqForm) -> bool:
    """Return whether E(C′, C) = 0.

    Raises:
        InvalidInputError: For bands, length-0 strings or different x₁.
    """
    for s in (s_c, s_c2):
        if s.is_band or s.entries == (0,):
            raise InvalidInputError("e_vanishes expects strings of positive length")
    if s_c.x1 != s_c2.x1:
        raise InvalidInputError("e_vanishes expects a shared x₁")
    if s_c.x1.inverse:
        # mirror: for inverse x₁ the roles of C and C′ swap
        return grund(s_c2.entries, s_c.entries)
    return grund(s_c.entries, s_c2.entries)


# --------------------------------------------------------------------------
# Edges between rigid strings


def _flank_condition(c: Entries, c2: Entries, high: int) -> bool:
    """Windows (high, s, high) of c force a ``high`` flank on every window of c2 with the same s."""
    needed = {(t, s) for _, t, s in _windows(c, high)}
    if not needed:
        return True
    for j, t, s in _windows(c2):
        if (t, s) in needed and c2[j] != high and c2[j + t] != high:
            return False
    return True


def _prefix_high_condition(c: Entries, c2: Entries, high: int) -> bool:
    for length in range(len(c)):
        if c[length] != high:
            continue
        for p in _occurrences(c[:length], c2, start=1, followed=True):
            if c2[p + length] != high:
                return False
    return True


def _boundary_occurrences(c: Entries, c2: Entries) -> bool:
    n, m = len(c), len(c2)
    return all(p == 0 or p + n == m for p in _occurrences(c, c2))


def edge_entries(c: Entries, c2: Entries) -> bool:
    """Edge test between two rigid entry lists with a shared x₁."""
    if c2[0] > c[0]:
        c, c2 = c2, c
    a = c[0]
    high = a + 1
    if c2[0] not in (a - 1, a):
        return False
    if c2[0] == a - 1 and (len(c2) != 1 or any(x != a for x in c)):
        return False
    for first, second in ((c, c2), (c2, c)):
        if not _prefix_high_condition(first, second, high):
            return False
        if not _flank_condition(first, second, high):
            return False
        if not _boundary_occurrences(first, second):
            return False
    return True


def edge_rigid(s1: SeqForm, s2: SeqForm) -> bool:
    """Return whether two rigid strings are joined by an edge (E vanishes both ways).

    Raises:
        InvalidInputError: If an input is a band or not rigid.
    """
    for s in (s1, s2):
        if s.is_band or not is_rigid(s):
            raise InvalidInputError(f"{s} is not a rigid string")
    if s1.is_simple and s2.is_simple:
        return s1.x1.source == s2.x1.source
    if s1.is_simple or s2.is_simple:
        simple, other = (s1, s2) if s1.is_simple else (s2, s1)
        vertex = simple.x1.source
        return other.x1.source == vertex and all(x == 1 for x in other.entries)
    if s1.x1 != s2.x1:
        return False
    return edge_entries(s1.entries, s2.entries)


# --------------------------------------------------------------------------
# Bands


def is_strongly_reduced_band(s: SeqForm) -> bool:
    """Return whether a band sequence is strongly reduced.

    Raises:
        NotABandError: If the cyclic sequence is a proper power.
    """
    if not s.is_band:
        raise InvalidInputError("expected a band sequence")
    if s.entries == (0,):
        return True
    b = s.entries
    if is_proper_power(b):
        raise NotABandError(f"{s} is a proper power")
    a = min(b)
    if any(x not in (a, a + 1) for x in b):
        return False
    twice = tuple(b) * 2
    high = {s_ for _, _, s_ in _windows(twice, a + 1)}
    low = {s_ for _, _, s_ in _windows(twice, a)}
    return not (high & low)


def _power(b: Entries, min_length: int) -> tuple[int, ...]:
    reps = max(3, -(-min_length // len(b)) + 2)
    return tuple(b) * reps


def edgeband_entries(c: Entries, b: Entries) -> bool:
    """Edge test between a rigid string and a band with a shared x₁."""
    n, m = len(c), len(b)
    if n * sum(b) != m * (sum(c) + 1):
        return False
    a = min(c)
    high = a + 1
    power = _power(b, n + 2)
    if not _prefix_high_condition(c, power, high):
        return False
    if not _flank_condition(c, power, high):
        return False
    if not _flank_condition(power, c, high):
        return False
    return not any(True for _ in _occurrences(c, power))


def edge_string_band(s_c: SeqForm, s_b: SeqForm) -> bool:
    """Return whether a rigid string and a strongly reduced band are adjacent."""
    if s_c.is_band or not s_b.is_band:
        raise InvalidInputError("expected a string and a band")
    if not is_rigid(s_c):
        raise InvalidInputError(f"{s_c} is not rigid")
    if not is_strongly_reduced_band(s_b):
        raise InvalidInputError(f"{s_b} is not strongly reduced")
    if s_b.entries == (0,):
        return False
    if s_c.is_simple:
        partner = canonical(SeqForm(simple_seq(s_c.x1.source).x1, (1,), True))
        return canonical(s_b) == partner
    for rep in band_representations(s_b):
        if rep.x1 == s_c.x1 and edgeband_entries(s_c.entries, rep.entries):
            return True
    return False


# --------------------------------------------------------------------------
# g-vectors


def _rotate(v: tuple[int, int, int], greek: str) -> tuple[int, int, int]:
    # the α-row is the base; β shifts right by one, γ by two
    shift = {"a": 0, "b": 1, "g": 2}[greek]
    for _ in range(shift):
        v = (v[2], v[0], v[1])
    return v


def _string_g(x1_inverse: bool, greek: str, n: int, a: int) -> tuple[int, int, int]:
    if x1_inverse:
        base = (2 + a, n - 2 - a, -n + 1)
    else:
        base = (-n + a, -a, n + 1)
    return _rotate(base, greek)


def _band_g(x1_inverse: bool, greek: str, n: int, a: int) -> tuple[int, int, int]:
    if x1_inverse:
        base = (a, n - a, -n)
    else:
        base = (-n + a, -a, n)
    return _rotate(base, greek)


def _tau_g(x1_inverse: bool, greek: str, n: int, a: int) -> tuple[int, int, int]:
    if x1_inverse:
        base = (a, n - a, -n - 1)
    else:
        base = (-n + 2 + a, -a - 2, n - 1)
    return _rotate(base, greek)


KRONECKER_G = {
    Arrow.A1: (1, -1, 0),
    Arrow.B1: (0, 1, -1),
    Arrow.G1: (-1, 0, 1),
}


def unit(i: int, sign: int = 1) -> tuple[int, int, int]:
    v = [0, 0, 0]
    v[i - 1] = sign
    return (v[0], v[1], v[2])


def g_formula(kind: str, code: SeqForm | NegativeSimple | int) -> Optional[GVector]:
    """Return the closed-form g-vector of a component.

    ``kind`` is one of rigid_string, band, neg_simple, tau_rigid or
    injective_shift. τ-shifts of simples have no closed form and return None.

    Raises:
        InvalidInputError: For an unknown kind or a code of the wrong shape.
    """
    if kind not in KINDS:
        raise InvalidInputError(f"unknown component kind {kind!r}")
    if kind in ("neg_simple", "injective_shift"):
        vertex = code.vertex if isinstance(code, NegativeSimple) else code
        if not isinstance(vertex, int):
            raise InvalidInputError("expected a vertex")
        return GVector(unit(vertex, 1 if kind == "neg_simple" else -1))
    if not isinstance(code, SeqForm):
        raise InvalidInputError("expected a sequence form")
    x1 = code.x1
    if kind == "band":
        if not code.is_band:
            raise InvalidInputError("band kind needs a band sequence")
        if code.entries == (0,):
            direct = x1 if not x1.inverse else canonical(code).x1
            return GVector(KRONECKER_G[direct.arrow])
        return GVector(_band_g(x1.inverse, x1.arrow.greek, len(code.entries), code.total))
    if code.is_band:
        raise InvalidInputError("string kinds need a string sequence")
    if kind == "rigid_string":
        if code.entries == (0,):
            return GVector(_string_g(x1.inverse, x1.arrow.greek, 1, 0))
        return GVector(_string_g(x1.inverse, x1.arrow.greek, len(code.entries), code.total))
    if code.entries == (0,):
        return None
    return GVector(_tau_g(x1.inverse, x1.arrow.greek, len(code.entries), code.total))


# --------------------------------------------------------------------------
# Enumeration


def rigid_entries(max_n: int, a: int) -> Iterator[tuple[int, ...]]:
    """Yield every rigid entry tuple with first entry ``a`` and length 1..max_n."""
    for n in range(1, max_n + 1):
        for tail in product((a, a + 1), repeat=n - 1):
            entries = (a,) + tail
            if is_rigid_entries(entries):
                yield entries


def rigid_sequences(
    max_n: int, max_a: int, sides: Sequence[Letter] = SIDES, simples: bool = True
) -> list[SeqForm]:
    """Return the rigid strings with n ≤ max_n and a ≤ max_a, simples first."""
    found: list[SeqForm] = []
    if simples:
        found.extend(simple_seq(v) for v in (1, 2, 3))
    for x1 in sides:
        for a in range(1, max_a + 1):
            found.extend(SeqForm(x1, entries) for entries in rigid_entries(max_n, a))
    return found


def sequences(max_n: int, max_a: int, band: bool = False) -> Iterator[SeqForm]:
    """Yield every sequence form with 1 ≤ aᵢ ≤ max_a and n ≤ max_n over all six sides.

    Band sequences that are proper powers are skipped.
    """
    for n in range(1, max_n + 1):
        for entries in product(range(1, max_a + 1), repeat=n):
            if band and is_proper_power(entries):
                continue
            for x1 in SIDES:
                yield SeqForm(x1, entries, band)


def strongly_reduced_bands(max_n: int, max_a: int) -> list[SeqForm]:
    """Canonical strongly reduced bands within bounds, the Kronecker bands first."""
    found = {canonical(SeqForm(side, (0,), True)) for side in SIDES if not side.inverse}
    kronecker = sorted(found, key=SeqForm.sort_key)
    rest = {canonical(s) for s in sequences(max_n, max_a, band=True) if is_strongly_reduced_band(s)}
    return kronecker + sorted(rest - found, key=SeqForm.sort_key)


def mirror(s: SeqForm) -> SeqForm:
    """Flip x₁ ↔ x₁⁻ keeping the entries."""
    for side in SIDES:
        if side.arrow == s.x1.arrow and side.inverse != s.x1.inverse:
            return SeqForm(side, s.entries, s.is_band)
    raise InvalidInputError(f"no mirror for {s}")


__all__ = [
    "GVector",
    "KINDS",
    "e_vanishes",
    "edge_rigid",
    "edge_string_band",
    "g_formula",
    "grund",
    "is_rigid",
    "is_strongly_reduced_band",
    "mirror",
    "rigid_entries",
    "rigid_sequences",
    "sequences",
    "simple_representations",
    "strongly_reduced_bands",
    "unit",
]
