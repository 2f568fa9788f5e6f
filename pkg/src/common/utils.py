"""Utility & helper functions."""

from __future__ import annotations

from typing import Iterable, Sequence

from sympy import fibonacci as _sympy_fibonacci

from .errors import InvalidInputError


def fibonacci(n: int) -> int:
    """Return F(n) with F(1)=F(2)=1, extended to negative n by F(-n)=(-1)^(n+1)F(n)."""
    if n >= 0:
        return int(_sympy_fibonacci(n))
    m = -n
    value = int(_sympy_fibonacci(m))
    return value if m % 2 == 1 else -value


def format_vector(v: Iterable[int]) -> str:
    """Render an integer vector as ``(x,y,z)``."""
    return "(" + ",".join(str(int(x)) for x in v) + ")"


def parse_vector(text: str, length: int = 3) -> tuple[int, ...]:
    """Parse ``(x,y,z)``, ``x,y,z`` or ``x y z`` into an integer tuple.

    Raises:
        InvalidInputError: If the text does not hold exactly ``length`` integers.
    """
    cleaned = text.strip().strip("()[]").replace(",", " ")
    try:
        values = tuple(int(part) for part in cleaned.split())
    except ValueError as e:
        raise InvalidInputError(f"not an integer vector: {text!r}") from e
    if len(values) != length:
        raise InvalidInputError(f"expected {length} integers, got {len(values)}")
    return values


def rotations(items: Sequence[int]) -> list[tuple[int, ...]]:
    """Return all cyclic rotations of a sequence, starting with itself."""
    seq = tuple(items)
    return [seq[i:] + seq[:i] for i in range(len(seq))] or [seq]


def is_proper_power(items: Sequence[int]) -> bool:
    """Return whether a cyclic sequence is a power of a strictly shorter one."""
    n = len(items)
    for d in range(1, n):
        if n % d == 0 and tuple(items) == tuple(items[:d]) * (n // d):
            return True
    return False
