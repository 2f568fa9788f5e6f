"""Strings, bands, the sequence notation (x₁:a₁,…,aₙ) and Ψ-codes.

Words are stored in traversal order: letter ``c_k`` sits between the diagram
vertices ``y_{k-1}`` and ``y_k``. A direct letter acts ``y_{k-1} ↦ y_k``, an
inverse letter acts ``y_k ↦ y_{k-1}``.

A sequence (x₁:a₁,…,aₙ) encodes the word
``(x₁ x₂⁻)^{a₁} (y₁⁻ y₂) (x₁ x₂⁻)^{a₂} … (x₁ x₂⁻)^{aₙ}`` where ``x₂`` is the
arrow parallel to ``x₁`` with the same orientation, and ``y₁`` is the index-1
letter of the same orientation ending where ``x₁`` starts. A band closes the
word with one more ``(y₁⁻ y₂)``.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from typing import Any, Iterable, Optional, Sequence, Union

from sympy.polys.domains import QQ

from common.errors import (
    InvalidInputError,
    InvalidParameterError,
    InvalidSequenceError,
    MalformedPsiError,
    NoPsiFormError,
    NotABandError,
    NotInNormalFormError,
)
from common.utils import is_proper_power

from .algebra_core import (
    ARROWS,
    VERTICES,
    Arrow,
    ExplicitRep,
    arrow_from_label,
    is_relation,
    rep_from_entries,
)

logger = logging.getLogger(__name__)

INVERSE_MARK = "⁻"


@dataclass(frozen=True, order=True)
class Letter:
    """An arrow or its formal inverse."""

    arrow: Arrow
    inverse: bool = False

    @property
    def source(self) -> int:
        return self.arrow.target if self.inverse else self.arrow.source

    @property
    def target(self) -> int:
        return self.arrow.source if self.inverse else self.arrow.target

    def inv(self) -> Letter:
        return Letter(self.arrow, not self.inverse)

    def parallel(self) -> Letter:
        return Letter(self.arrow.parallel, self.inverse)

    @property
    def third_vertex(self) -> int:
        """The vertex that is neither source nor target."""
        return 6 - self.arrow.source - self.arrow.target

    @property
    def label(self) -> str:
        return self.arrow.label + ("-" if self.inverse else "")

    @property
    def symbol(self) -> str:
        return self.arrow.symbol + (INVERSE_MARK if self.inverse else "")

    def sort_key(self) -> tuple[int, int]:
        return (int(self.inverse), self.arrow.order)

    def __repr__(self) -> str:
        return self.symbol


def letter_from_label(label: str) -> Letter:
    """Parse ``a1``, ``b2-`` and the like."""
    inverse = label.endswith("-")
    return Letter(arrow_from_label(label.rstrip("-")), inverse)


# The six letters allowed as x₁, in canonical order.
SIDES: tuple[Letter, ...] = tuple(
    Letter(a, inv) for inv in (False, True) for a in ARROWS if a.index == 1
)


def _junction_letter(x1: Letter) -> Letter:
    """Return y₁: index 1, same orientation as x₁, ending at s(x₁)."""
    for side in SIDES:
        if side.inverse == x1.inverse and side.target == x1.source:
            return side
    raise InvalidSequenceError(f"no junction letter for {x1!r}")


def _pair_is_valid(first: Letter, then: Letter) -> bool:
    if first.target != then.source:
        return False
    if then == first.inv():
        return False
    if not first.inverse and not then.inverse:
        return not is_relation(first.arrow, then.arrow)
    if first.inverse and then.inverse:
        return not is_relation(then.arrow, first.arrow)
    return True


def _runs(letters: Sequence[Letter], cyclic: bool) -> int:
    """Return the longest run of equally oriented letters."""
    if not letters:
        return 0
    if cyclic and all(c.inverse == letters[0].inverse for c in letters):
        return len(letters) * 2
    seq = list(letters) * 2 if cyclic else list(letters)
    best = run = 0
    previous: Optional[bool] = None
    for c in seq:
        run = run + 1 if c.inverse == previous else 1
        previous = c.inverse
        best = max(best, run)
    return min(best, len(letters)) if cyclic else best


@dataclass(frozen=True)
class StringWord:
    """A string: a reduced walk avoiding relations, with a base vertex."""

    letters: tuple[Letter, ...]
    base: int

    def __post_init__(self) -> None:
        if self.base not in VERTICES:
            raise InvalidInputError(f"unknown vertex {self.base}")
        if self.letters and self.letters[0].source != self.base:
            raise InvalidInputError("first letter does not start at the base vertex")
        for first, then in zip(self.letters, self.letters[1:]):
            if not _pair_is_valid(first, then):
                raise InvalidInputError(f"invalid factor {first!r}{then!r}")

    def __len__(self) -> int:
        return len(self.letters)

    @property
    def end(self) -> int:
        return self.letters[-1].target if self.letters else self.base

    def vertices(self) -> list[int]:
        """Return the diagram vertices y_0..y_m."""
        return [self.base] + [c.target for c in self.letters]

    def inverse(self) -> StringWord:
        return StringWord(tuple(c.inv() for c in reversed(self.letters)), self.end)

    def max_run(self) -> int:
        return _runs(self.letters, cyclic=False)

    def is_lambda_p_string(self, p: int) -> bool:
        """Return whether no directed run reaches length p."""
        return self.max_run() <= p - 1

    def __str__(self) -> str:
        if not self.letters:
            return f"e{self.base}"
        return "".join(c.symbol for c in self.letters)


@dataclass(frozen=True)
class BandWord:
    """A band: a primitive, non-directed cyclic string."""

    letters: tuple[Letter, ...]

    def __post_init__(self) -> None:
        n = len(self.letters)
        if n == 0:
            raise NotABandError("a band has at least one letter")
        for i in range(n):
            if not _pair_is_valid(self.letters[i], self.letters[(i + 1) % n]):
                raise NotABandError("cyclic word is not a string at every rotation")
        if all(c.inverse == self.letters[0].inverse for c in self.letters):
            raise NotABandError("a directed cycle is not a band")
        keys = [(c.arrow.order, c.inverse) for c in self.letters]
        if is_proper_power(keys):
            raise NotABandError("cyclic word is a proper power")

    def __len__(self) -> int:
        return len(self.letters)

    def vertices(self) -> list[int]:
        return [c.source for c in self.letters]

    def inverse(self) -> BandWord:
        return BandWord(tuple(c.inv() for c in reversed(self.letters)))

    def rotate(self, k: int) -> BandWord:
        k %= len(self.letters)
        return BandWord(self.letters[k:] + self.letters[:k])

    def same_band(self, other: BandWord) -> bool:
        """Return whether two cyclic words agree up to rotation and inversion."""
        if len(self) != len(other):
            return False
        targets = {other.letters, other.inverse().letters}
        return any(self.rotate(k).letters in targets for k in range(len(self)))

    def __str__(self) -> str:
        return "".join(c.symbol for c in self.letters)


Word = Union[StringWord, BandWord]


@dataclass(frozen=True)
class SeqForm:
    """The sequence notation (x₁:a₁,…,aₙ), with a trailing comma for bands."""

    x1: Letter
    entries: tuple[int, ...]
    is_band: bool = False

    def __post_init__(self) -> None:
        if self.x1 not in SIDES:
            raise InvalidSequenceError(f"x₁ must be an index-1 letter, got {self.x1!r}")
        if not self.entries:
            raise InvalidSequenceError("a sequence needs at least one entry")
        if self.entries != (0,) and any(a < 1 for a in self.entries):
            raise InvalidSequenceError(f"entries must be positive or the single 0: {self.entries}")

    @property
    def n(self) -> int:
        return 0 if self.entries == (0,) else len(self.entries)

    @property
    def total(self) -> int:
        return sum(self.entries)

    @property
    def is_simple(self) -> bool:
        return not self.is_band and self.entries == (0,)

    @property
    def is_kronecker(self) -> bool:
        return self.is_band and self.entries == (0,)

    def with_entries(self, entries: Iterable[int]) -> SeqForm:
        return SeqForm(self.x1, tuple(entries), self.is_band)

    def sort_key(self) -> tuple[Any, ...]:
        return (int(self.is_band), self.x1.sort_key(), len(self.entries), self.entries)

    def __str__(self) -> str:
        return format_seq(self)


@dataclass(frozen=True)
class NegativeSimple:
    """The negative simple 𝒮ᵢ⁻: zero module with one-dimensional decoration at i."""

    vertex: int

    def __str__(self) -> str:
        return f"S{self.vertex}-"


@dataclass(frozen=True)
class PsiCode:
    """A Ψ-code (x₁: a|k₀|…|k_m); ``special`` carries the ±1 of the a=0 codes."""

    x1: Letter
    a: int
    ks: tuple[int, ...] = ()
    special: Optional[int] = None
    is_band: bool = False

    def __post_init__(self) -> None:
        if self.x1 not in SIDES:
            raise MalformedPsiError(f"x₁ must be an index-1 letter, got {self.x1!r}")
        if self.a == 0:
            if self.special not in (1, -1) or self.ks:
                raise MalformedPsiError("a=0 codes are exactly (0|1) and (0|-1)")
            return
        if self.a < 0 or self.special is not None:
            raise MalformedPsiError("a must be positive outside the (0|±1) codes")
        if not self.ks or any(k < 1 for k in self.ks):
            raise MalformedPsiError("k₀..k_m must be positive")
        if len(self.ks) > 1 and self.ks[-1] < 2:
            raise MalformedPsiError("k_m must be at least 2 when m ≥ 1")

    @property
    def m(self) -> int:
        return len(self.ks) - 1

    def as_band(self, is_band: bool = True) -> PsiCode:
        return PsiCode(self.x1, self.a, self.ks, self.special, is_band)

    def sort_key(self) -> tuple[Any, ...]:
        return (int(self.is_band), self.x1.sort_key(), self.a, self.special or 0, self.ks)

    def __str__(self) -> str:
        return format_psi(self)


Code = Union[SeqForm, PsiCode]


# --------------------------------------------------------------------------
# Sequence form ↔ word


def seq_to_word(s: SeqForm) -> Word:
    """Return the string or band word of a sequence form."""
    x1 = s.x1
    x2 = x1.parallel()
    y1 = _junction_letter(x1)
    y2 = y1.parallel()
    block = (x1, x2.inv())
    junction = (y1.inv(), y2)
    if s.is_band:
        if s.entries == (0,):
            return BandWord(block)
        letters: list[Letter] = []
        for a in s.entries:
            letters.extend(block * a)
            letters.extend(junction)
        return BandWord(tuple(letters))
    if s.entries == (0,):
        return StringWord((), x1.source)
    letters = []
    for i, a in enumerate(s.entries):
        if i:
            letters.extend(junction)
        letters.extend(block * a)
    return StringWord(tuple(letters), x1.source)


def _parse_blocks(letters: Sequence[Letter], band: bool) -> Optional[SeqForm]:
    """Read ``letters`` as blocks and junctions starting with x₁ = letters[0]."""
    if not letters or letters[0] not in SIDES:
        return None
    x1 = letters[0]
    x2 = x1.parallel()
    y1 = _junction_letter(x1)
    block = (x1, x2.inv())
    junction = (y1.inv(), y1.parallel())
    entries: list[int] = []
    i = 0
    n = len(letters)
    while i < n:
        count = 0
        while i + 1 < n and (letters[i], letters[i + 1]) == block:
            count += 1
            i += 2
        if count == 0:
            return None
        entries.append(count)
        if i == n:
            break
        if i + 1 < n and (letters[i], letters[i + 1]) == junction:
            i += 2
            if i == n:
                return SeqForm(x1, tuple(entries), True) if band else None
            continue
        return None
    if band:
        if entries == [1] and len(letters) == 2:
            return SeqForm(x1, (0,), True)
        return None
    return SeqForm(x1, tuple(entries), False)


def simple_seq(vertex: int) -> SeqForm:
    """Canonical sequence of the simple at ``vertex``: the direct index-1 arrow out of it."""
    for side in SIDES:
        if not side.inverse and side.source == vertex:
            return SeqForm(side, (0,))
    raise InvalidInputError(f"unknown vertex {vertex}")


def simple_representations(vertex: int) -> list[SeqForm]:
    """Both sequence forms (x:0) of the simple at ``vertex``."""
    return [SeqForm(side, (0,)) for side in SIDES if side.source == vertex]


def word_to_seq(w: Word) -> SeqForm:
    """Return the canonical sequence form of a string or band word.

    Raises:
        NotInNormalFormError: If the word is not of sequence shape.
    """
    if isinstance(w, StringWord):
        if not w.letters:
            return simple_seq(w.base)
        for candidate in (w, w.inverse()):
            parsed = _parse_blocks(candidate.letters, band=False)
            if parsed is not None and seq_to_word(parsed) == candidate:
                return parsed
        raise NotInNormalFormError(f"string {w} is not of sequence shape")
    forms = band_forms(w)
    if not forms:
        raise NotInNormalFormError(f"band {w} is not of sequence shape")
    return forms[0]


def band_forms(w: BandWord) -> list[SeqForm]:
    """All sequence forms of a band over rotations and inversion, canonical first."""
    found: set[SeqForm] = set()
    for word in (w, w.inverse()):
        for k in range(len(word)):
            rotated = word.rotate(k)
            parsed = _parse_blocks(rotated.letters, band=True)
            if parsed is None:
                continue
            encoded = seq_to_word(parsed)
            if isinstance(encoded, BandWord) and encoded.letters == rotated.letters:
                found.add(parsed)
    return sorted(found, key=_band_key)


def _band_key(s: SeqForm) -> tuple[Any, ...]:
    return (int(s.x1.inverse), s.x1.arrow.order, s.entries)


def canonical(s: SeqForm) -> SeqForm:
    """Return the canonical representative of a sequence form."""
    if s.is_band:
        return word_to_seq(seq_to_word(s))
    if s.entries == (0,):
        return simple_seq(s.x1.source)
    return s


def band_representations(s: SeqForm) -> list[SeqForm]:
    """All sequence forms of the band of ``s``."""
    word = seq_to_word(s)
    assert isinstance(word, BandWord)
    return band_forms(word)


def dims_of(s: SeqForm) -> tuple[int, int, int]:
    """Dimension vector of the string or band module of ``s``."""
    counts = [0, 0, 0]
    for v in seq_to_word(s).vertices():
        counts[v - 1] += 1
    return (counts[0], counts[1], counts[2])


# --------------------------------------------------------------------------
# Ψ-codes


def negative_simple_of(x1: Letter) -> NegativeSimple:
    """The negative simple named by (x₁:0|−1)."""
    return NegativeSimple(x1.third_vertex)


def psi_decode(c: PsiCode) -> Union[SeqForm, NegativeSimple]:
    """Decode a Ψ-code into its sequence form (or negative simple)."""
    if c.a == 0:
        if c.special == 1:
            return SeqForm(c.x1, (1,), True) if c.is_band else SeqForm(c.x1, (0,))
        return SeqForm(c.x1, (0,), True) if c.is_band else negative_simple_of(c.x1)
    v, w = decode_vw(c.a, c.ks)
    return SeqForm(c.x1, tuple(w if c.is_band else v), c.is_band)


def decode_vw(a: int, ks: Sequence[int]) -> tuple[list[int], list[int]]:
    """Run the v/w/P recursion and return (v_m, w_m)."""
    if not ks:
        raise MalformedPsiError("missing k₀")
    if len(ks) > 1 and ks[-1] < 2:
        raise MalformedPsiError("k_m must be at least 2 when m ≥ 1")
    k0 = ks[0]
    v = [a] * k0
    w = [a] * (k0 - 1) + [a + 1]
    p = [a + 1]
    for k in ks[1:]:
        head = (v + p) * (k - 1)
        v, w, p = head + v, head + w, p + w
    return v, w


def psi_encode(s: SeqForm) -> PsiCode:
    """Return the Ψ-code of a rigid string or strongly reduced band.

    Raises:
        NoPsiFormError: If the string is not rigid or the band not strongly reduced.
    """
    from .classification import is_rigid, is_strongly_reduced_band

    if s.is_band:
        if s.entries == (0,):
            return PsiCode(s.x1, 0, (), -1, True)
        if not is_strongly_reduced_band(s):
            raise NoPsiFormError(f"{s} is not a strongly reduced band")
        n = len(s.entries)
        for k in range(n):
            rotated = s.entries[k:] + s.entries[:k]
            cut = rotated[:-1] + (rotated[-1] - 1,)
            if cut == (0,):
                return PsiCode(s.x1, 0, (), 1, True)
            if min(cut) < 1 or not is_rigid(SeqForm(s.x1, cut)):
                continue
            code = psi_encode(SeqForm(s.x1, cut)).as_band()
            decoded = psi_decode(code)
            if isinstance(decoded, SeqForm) and decoded.entries == rotated:
                return code
        raise NoPsiFormError(f"no rotation of {s} has a Ψ-code")
    if s.entries == (0,):
        return PsiCode(s.x1, 0, (), 1, False)
    if not is_rigid(s):
        raise NoPsiFormError(f"{s} is not rigid")
    ks = _encode_entries(s.entries)
    if ks is None:
        raise NoPsiFormError(f"{s} does not follow the Ψ recursion")
    code = PsiCode(s.x1, s.entries[0], tuple(ks))
    if psi_decode(code) != s:
        raise NoPsiFormError(f"{s} does not follow the Ψ recursion")
    return code


def _encode_entries(target: Sequence[int]) -> Optional[list[int]]:
    t = list(target)
    a = t[0]
    k0 = 0
    while k0 < len(t) and t[k0] == a:
        k0 += 1
    if k0 == len(t):
        return [k0]
    v = [a] * k0
    w = [a] * (k0 - 1) + [a + 1]
    p = [a + 1]
    return _search(t, v, w, p, [k0])


def _search(t: list[int], v: list[int], w: list[int], p: list[int], ks: list[int]) -> Optional[list[int]]:
    # k = 1 only grows P; longer k must keep v a prefix of the target
    if len(v) + len(p) < len(t):
        found = _search(t, v, w, p + w, ks + [1])
        if found is not None:
            return found
    k = 2
    while True:
        head = (v + p) * (k - 1)
        new_v = head + v
        if len(new_v) > len(t) or t[: len(new_v)] != new_v:
            return None
        if new_v == t:
            return ks + [k]
        found = _search(t, new_v, head + w, p + w, ks + [k])
        if found is not None:
            return found
        k += 1


def size(code: Code) -> int:
    """Return n, the length of the decoded sequence (0 for simples and negatives)."""
    if isinstance(code, SeqForm):
        return code.n
    decoded = psi_decode(code)
    return decoded.n if isinstance(decoded, SeqForm) else 0


# --------------------------------------------------------------------------
# Modules


def string_module(w: StringWord, domain: Any = QQ) -> ExplicitRep:
    """Return the string module M(w)."""
    verts = w.vertices()
    index, dims = _index_vertices(verts)
    entries: dict[Arrow, dict[tuple[int, int], Any]] = {a: {} for a in ARROWS}
    for k, c in enumerate(w.letters, start=1):
        lo, hi = index[k - 1], index[k]
        if c.inverse:
            entries[c.arrow][(lo, hi)] = 1
        else:
            entries[c.arrow][(hi, lo)] = 1
    return rep_from_entries(dims, entries, domain)


def band_module(b: BandWord, lam: Any = 1, k: int = 1, domain: Any = QQ) -> ExplicitRep:
    """Return M(b, λ, k); the first letter acts by the Jordan block J_k(λ).

    Raises:
        InvalidParameterError: If λ is zero or k < 1.
    """
    value = domain.convert(lam)
    if domain.is_zero(value):
        raise InvalidParameterError("band parameter λ must be nonzero")
    if k < 1:
        raise InvalidParameterError("band multiplicity k must be positive")
    verts = b.vertices()
    m = len(verts)
    index, single = _index_vertices(verts)
    dims = [d * k for d in single]
    entries: dict[Arrow, dict[tuple[int, int], Any]] = {a: {} for a in ARROWS}
    for pos, c in enumerate(b.letters):
        lo, hi = index[pos], index[(pos + 1) % m]
        src, dst = (hi, lo) if c.inverse else (lo, hi)
        for j in range(k):
            if pos == 0:
                entries[c.arrow][(dst * k + j, src * k + j)] = value
                if j + 1 < k:
                    entries[c.arrow][(dst * k + j, src * k + j + 1)] = 1
            else:
                entries[c.arrow][(dst * k + j, src * k + j)] = 1
    return rep_from_entries(dims, entries, domain)


def _index_vertices(verts: Sequence[int]) -> tuple[list[int], list[int]]:
    counts = [0, 0, 0]
    index = []
    for v in verts:
        index.append(counts[v - 1])
        counts[v - 1] += 1
    return index, counts


def seq_module(s: SeqForm, lam: Any = 1, domain: Any = QQ) -> ExplicitRep:
    """Module of a sequence form: string module, or band module at parameter λ."""
    word = seq_to_word(s)
    if isinstance(word, BandWord):
        return band_module(word, lam, 1, domain)
    return string_module(word, domain)


# --------------------------------------------------------------------------
# Text grammar

_SIDE_RE = r"(a1|b1|g1)(-?)"
_SEQ_RE = re.compile(rf"^{_SIDE_RE}:(\d+(?:,\d+)*)(,?)$")
_PSI_RE = re.compile(rf"^{_SIDE_RE}:(\d+(?:\|-?\d+)+)(,?)$")


def format_side(x1: Letter) -> str:
    return x1.label


def format_seq(s: SeqForm) -> str:
    body = ",".join(str(a) for a in s.entries)
    return f"{format_side(s.x1)}:{body}{',' if s.is_band else ''}"


def format_psi(c: PsiCode) -> str:
    if c.a == 0:
        body = f"0|{c.special}"
    else:
        body = "|".join([str(c.a)] + [str(k) for k in c.ks])
    return f"{format_side(c.x1)}:{body}{',' if c.is_band else ''}"


def format_code(code: Union[Code, NegativeSimple]) -> str:
    if isinstance(code, SeqForm):
        return format_seq(code)
    if isinstance(code, PsiCode):
        return format_psi(code)
    return str(code)


def parse_seq(text: str) -> SeqForm:
    """Parse ``a1:1,2,1`` (string) or ``a1:1,2,1,`` (band)."""
    match = _SEQ_RE.match(text.strip())
    if not match:
        raise InvalidSequenceError(f"cannot parse sequence {text!r}")
    side, minus, body, band = match.groups()
    entries = tuple(int(part) for part in body.split(","))
    return SeqForm(letter_from_label(side + minus), entries, bool(band))


def parse_psi(text: str) -> PsiCode:
    """Parse ``a1:1|2|2``, ``a1:0|-1`` or ``a1:0|1``; a trailing comma marks a band."""
    match = _PSI_RE.match(text.strip())
    if not match:
        raise MalformedPsiError(f"cannot parse Ψ-code {text!r}")
    side, minus, body, band = match.groups()
    numbers = [int(part) for part in body.split("|")]
    x1 = letter_from_label(side + minus)
    if numbers[0] == 0:
        if len(numbers) != 2:
            raise MalformedPsiError("a=0 codes are exactly (0|1) and (0|-1)")
        return PsiCode(x1, 0, (), numbers[1], bool(band))
    return PsiCode(x1, numbers[0], tuple(numbers[1:]), None, bool(band))


def parse_code(text: str) -> Code:
    """Parse either notation; a ``|`` selects the Ψ grammar."""
    return parse_psi(text) if "|" in text else parse_seq(text)


def to_seq(code: Code) -> Union[SeqForm, NegativeSimple]:
    """Return the sequence form behind either notation."""
    return psi_decode(code) if isinstance(code, PsiCode) else code
