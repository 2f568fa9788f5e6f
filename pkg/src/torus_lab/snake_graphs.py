"""Snake graphs of sign functions and their perfect matchings."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import networkx as nx

from common.errors import InvalidParameterError

logger = logging.getLogger(__name__)

BRUTE_FORCE_LIMIT = 14

Node = tuple[int, int]


@dataclass(frozen=True)
class SignFunction:
    """``d`` tiles and the ``d − 1`` signs between consecutive tiles."""

    d: int
    signs: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.d < 1:
            raise InvalidParameterError(f"a snake needs at least one tile, got d={self.d}")
        if len(self.signs) != self.d - 1:
            raise InvalidParameterError(
                f"d={self.d} needs {self.d - 1} signs, got {len(self.signs)}"
            )
        if any(s not in (1, -1) for s in self.signs):
            raise InvalidParameterError(f"signs must be +1 or -1, got {self.signs}")

    @classmethod
    def parse(cls, text: str) -> SignFunction:
        """Read a string of ``+``/``-``; an empty string or ``.`` is the single tile."""
        cleaned = text.strip()
        if cleaned in ("", "."):
            return cls(1)
        try:
            signs = tuple({"+": 1, "-": -1}[ch] for ch in cleaned)
        except KeyError as e:
            raise InvalidParameterError(f"unexpected sign {e.args[0]!r} in {text!r}") from e
        return cls(len(signs) + 1, signs)

    def flipped(self) -> SignFunction:
        return SignFunction(self.d, tuple(-s for s in self.signs))

    def reversed(self) -> SignFunction:
        return SignFunction(self.d, tuple(reversed(self.signs)))

    def __str__(self) -> str:
        return "".join("+" if s > 0 else "-" for s in self.signs) or "."


def tile_origins(sf: SignFunction) -> list[Node]:
    """Lower-left corners of the tiles.

    Tile j+1 sits above tile j when s_j·(−1)^j > 0 and to its right otherwise,
    so alternating signs give a straight snake.
    """
    x, y = 0, 0
    origins = [(x, y)]
    for j, s in enumerate(sf.signs):
        if s * (-1) ** j > 0:
            y += 1
        else:
            x += 1
        origins.append((x, y))
    return origins


def snake_graph(sf: SignFunction) -> nx.Graph:
    """Union of the unit squares at ``tile_origins``; the origins are kept in ``graph.graph['tiles']``."""
    g = nx.Graph(tiles=tile_origins(sf))
    for x, y in g.graph["tiles"]:
        corners = [(x, y), (x + 1, y), (x + 1, y + 1), (x, y + 1)]
        for i in range(4):
            g.add_edge(corners[i], corners[(i + 1) % 4])
    return g


def matchings(sf: SignFunction) -> int:
    """Count perfect matchings by a two-state transfer over the tiles.

    ``a`` counts matchings of the snake so far, ``c`` those that leave the
    glueing edge of the next tile free. ``c`` is refreshed from the previous
    ``a`` exactly where the snake runs straight.
    """
    a, c = 1, 1
    for k in range(1, sf.d + 1):
        straight = 2 <= k <= sf.d - 1 and sf.signs[k - 2] != sf.signs[k - 1]
        a, c = a + c, (a if straight else c)
    return a


def matchings_bruteforce(sf: SignFunction, graph: Optional[nx.Graph] = None) -> int:
    """Enumerate perfect matchings of the snake graph recursively.

    Raises:
        InvalidParameterError: If ``d`` exceeds ``BRUTE_FORCE_LIMIT``.
    """
    if sf.d > BRUTE_FORCE_LIMIT:
        raise InvalidParameterError(
            f"brute force is limited to d <= {BRUTE_FORCE_LIMIT}, got {sf.d}"
        )
    g = graph if graph is not None else snake_graph(sf)

    def count(free: frozenset[Node]) -> int:
        if not free:
            return 1
        v = min(free)
        rest = free - {v}
        return sum(count(rest - {u}) for u in g.neighbors(v) if u in rest)

    total = count(frozenset(g.nodes))
    logger.debug("snake %s: %d matchings by enumeration", sf, total)
    return total


def string_from_signs(sf: SignFunction) -> tuple[bool, ...]:
    """Inverse flags of the string diagram on ``d`` vertices.

    The first edge points down; an edge keeps that direction when its sign
    equals the first sign and is reversed otherwise.
    """
    if not sf.signs:
        return ()
    first = sf.signs[0]
    return tuple(s != first for s in sf.signs)


def directions(sf: SignFunction) -> list[str]:
    return ["up" if inverse else "down" for inverse in string_from_signs(sf)]
