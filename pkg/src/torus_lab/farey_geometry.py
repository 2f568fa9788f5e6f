"""Farey points and the three shear-coordinate vector families.

ccw(a,b) = (1−b, a+1, b−a−1), cw(a,b) = (−1−b, a−1, b−a+1) and the closed
vectors (−b, a, b−a), each cyclically rotated. The three rotation classes
are glued onto one projective line by the order-three map
R(a,b) = (−b, a+b): a vector with Farey point L and rotation r sits at
R^((r−1) mod 3)(L). Compatibility is then a determinant test there.
"""

from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass
from math import gcd
from typing import Optional, Sequence, Union

from sympy import Matrix

from common.errors import (
    InternalError,
    InvalidInputError,
    NotAComponentGVectorError,
    SearchBoundExceededError,
)

from .classification import GVector

logger = logging.getLogger(__name__)

FAMILIES = ("ccw", "cw", "closed")

Vector = tuple[int, int, int]
Point = tuple[int, int]


@dataclass(frozen=True)
class FareyPoint:
    a: int
    b: int

    def __post_init__(self) -> None:
        if gcd(self.a, self.b) != 1:
            raise InvalidInputError(f"({self.a},{self.b}) is not a Farey point")

    @property
    def is_standard(self) -> bool:
        return self.a >= 0 and (self.a > 0 or self.b == 1)

    def as_tuple(self) -> Point:
        return (self.a, self.b)

    def __str__(self) -> str:
        return f"({self.a},{self.b})"


def are_neighbors(p: Union[FareyPoint, Point], q: Union[FareyPoint, Point]) -> bool:
    """Return whether |ad − bc| = 1."""
    a, b = p.as_tuple() if isinstance(p, FareyPoint) else p
    c, d = q.as_tuple() if isinstance(q, FareyPoint) else q
    return abs(a * d - b * c) == 1


def _rot(v: Vector, times: int) -> Vector:
    for _ in range(times % 3):
        v = (v[2], v[0], v[1])
    return v


def _unrot(v: Vector, times: int) -> Vector:
    for _ in range(times % 3):
        v = (v[1], v[2], v[0])
    return v


def _base(family: str, a: int, b: int) -> Vector:
    if family == "ccw":
        return (1 - b, a + 1, b - a - 1)
    if family == "cw":
        return (-1 - b, a - 1, b - a + 1)
    return (-b, a, b - a)


def _in_domain(family: str, a: int, b: int) -> bool:
    if gcd(a, b) != 1:
        return False
    if family == "cw":
        return a > 0 and b >= 0
    return a >= 0 and b > 0


@dataclass(frozen=True)
class CurveVector:
    """A member of one family: Farey point, rotation and (for closed curves) a sign."""

    family: str
    point: FareyPoint
    rotation: int = 0
    sign: int = 1

    @property
    def v(self) -> Vector:
        base = _base(self.family, self.point.a, self.point.b)
        x, y, z = _rot(base, self.rotation)
        return (self.sign * x, self.sign * y, self.sign * z)

    def __str__(self) -> str:
        prefix = "-" if self.sign < 0 else ""
        return f"{prefix}{self.family}{self.point}@{self.rotation}"


def curve_vector(family: str, p: Union[FareyPoint, Point], rotation: int = 0) -> CurveVector:
    """Return the family vector at ``p`` rotated ``rotation`` times.

    Raises:
        InvalidInputError: For an unknown family or a point outside its domain.
    """
    if family not in FAMILIES:
        raise InvalidInputError(f"unknown family {family!r}")
    point = p if isinstance(p, FareyPoint) else FareyPoint(*p)
    if not _in_domain(family, point.a, point.b):
        raise InvalidInputError(f"{point} is outside the {family} domain")
    return CurveVector(family, point, rotation % 3)


def gvector_to_curve(g: Union[GVector, Sequence[int]]) -> CurveVector:
    """Identify a g-vector with a curve: sum 1 is ccw, sum −1 is cw, sum 0 closed.

    Raises:
        NotAComponentGVectorError: If no family member equals ``g``.
    """
    v = tuple(g.g if isinstance(g, GVector) else g)
    if len(v) != 3:
        raise NotAComponentGVectorError(f"{v} is not a triple")
    total = sum(v)
    signs = (1, -1) if total == 0 else (1,)
    for sign in signs:
        w = (sign * v[0], sign * v[1], sign * v[2])
        for r in range(3):
            x, y, z = _unrot(w, r)
            if total == 1:
                family, a, b = "ccw", y - 1, 1 - x
            elif total == -1:
                family, a, b = "cw", y + 1, -1 - x
            elif total == 0:
                family, a, b = "closed", y, -x
            else:
                raise NotAComponentGVectorError(f"{v} sums to {total}")
            if _base(family, a, b) == (x, y, z) and _in_domain(family, a, b):
                return CurveVector(family, FareyPoint(a, b), r, sign)
    raise NotAComponentGVectorError(f"{v} matches no curve vector")


# --------------------------------------------------------------------------
# The projective line shared by all rotation classes


def _r(p: Point) -> Point:
    return (-p[1], p[0] + p[1])


def _r_inv(p: Point) -> Point:
    return (p[0] + p[1], -p[0])


def unified_point(curve: CurveVector) -> Point:
    """Return R^((r−1) mod 3) of the curve's Farey point."""
    p = curve.point.as_tuple()
    for _ in range((curve.rotation - 1) % 3):
        p = _r(p)
    return p


def place(point: Point, family: str) -> CurveVector:
    """Return the family vector sitting at a point of the shared line."""
    p = point
    for k in range(3):
        for a, b in (p, (-p[0], -p[1])):
            if _in_domain(family, a, b):
                return CurveVector(family, FareyPoint(a, b), (k + 1) % 3)
        p = _r_inv(p)
    raise InvalidInputError(f"{point} is not a Farey point")


def _same_point(p: Point, q: Point) -> bool:
    return p == q or p == (-q[0], -q[1])


def compatible(u: CurveVector, v: CurveVector) -> bool:
    """ccw–ccw and cw–cw are compatible at Farey neighbours, closed–ccw and closed–cw at the same point."""
    pu, pv = unified_point(u), unified_point(v)
    families = {u.family, v.family}
    if u.family == v.family and u.family in ("ccw", "cw"):
        return are_neighbors(pu, pv)
    if families in ({"closed", "ccw"}, {"closed", "cw"}):
        return _same_point(pu, pv)
    return False


# --------------------------------------------------------------------------
# Decomposition of Z³


def _solve(columns: Sequence[Vector], v: Vector) -> Optional[list[int]]:
    matrix = Matrix([[c[i] for c in columns] for i in range(3)])
    solution = matrix.LUsolve(Matrix(v))
    if any(not x.is_integer for x in solution):
        return None
    return [int(x) for x in solution]


def _wall(v: Vector, curve: CurveVector, weight: int, point: Point) -> Optional[list[tuple[CurveVector, int]]]:
    rest = tuple(x - weight * y for x, y in zip(v, curve.v))
    if rest == (0, 0, 0):
        return [(curve, weight)]
    closed = place(point, "closed")
    cv = closed.v
    k = next((r // c for r, c in zip(rest, cv) if c != 0), 0)
    if k == 0 or tuple(k * c for c in cv) != rest:
        return None
    signed = CurveVector("closed", closed.point, closed.rotation, 1 if k > 0 else -1)
    return [(curve, weight), (signed, abs(k))]


def _flip(triangle: tuple[Point, Point, Point], i: int) -> tuple[Point, Point, Point]:
    x, y = [p for j, p in enumerate(triangle) if j != i]
    plus = (x[0] + y[0], x[1] + y[1])
    new = (x[0] - y[0], x[1] - y[1]) if _same_point(plus, triangle[i]) else plus
    flipped = list(triangle)
    flipped[i] = new
    return flipped[0], flipped[1], flipped[2]


def _key(p: Point) -> Point:
    return p if p[0] > 0 or (p[0] == 0 and p[1] > 0) else (-p[0], -p[1])


def _multiple(target: Vector, weight: int) -> Optional[list[tuple[CurveVector, int]]]:
    if any(x % weight for x in target):
        return None
    try:
        return [(gvector_to_curve(tuple(x // weight for x in target)), weight)]
    except NotAComponentGVectorError:
        return None


def decompose_z3(v: Sequence[int], cap: int = 256) -> list[tuple[CurveVector, int]]:
    """Write ``v`` as a positive combination of pairwise compatible curve vectors.

    Sum 0 is a multiple of one closed vector, and a multiple of a single curve
    vector is returned as is. Otherwise the Farey triangles are searched
    outward from the one with vertices (0,1), (1,0), (-1,1). Each triangle is
    reached from its parent by a mediant flip, and the frontier is ordered by
    depth plus the negative part of the parent's coefficients, with a penalty
    for flipping away from a negative coefficient. Every Farey triangle has a
    finite key, so any decomposition over a triangle or a closed ray is found.

    Raises:
        SearchBoundExceededError: If ``cap`` triangles do not suffice.
    """
    target: Vector = (int(v[0]), int(v[1]), int(v[2]))
    if target == (0, 0, 0):
        return []
    total = sum(target)
    if total == 0:
        k = gcd(gcd(target[0], target[1]), target[2])
        prim = (target[0] // k, target[1] // k, target[2] // k)
        return [(gvector_to_curve(prim), k)]
    family = "ccw" if total > 0 else "cw"
    weight = abs(total)
    single = _multiple(target, weight)
    if single is not None:
        return _checked(target, single)

    walls: set[Point] = set()
    root: tuple[Point, Point, Point] = ((0, 1), (1, 0), (-1, 1))
    frontier: list[tuple[int, int, tuple[Point, Point, Point], int, int]] = [(0, 0, root, -1, 0)]
    order = 1
    for step in range(cap):
        if not frontier:
            break
        _, _, triangle, newest, depth = heapq.heappop(frontier)
        curves = [place(p, family) for p in triangle]
        for p, curve in zip(triangle, curves):
            if _key(p) in walls:
                continue
            walls.add(_key(p))
            found = _wall(target, curve, weight, p)
            if found is not None:
                return _checked(target, found)
        coeffs = _solve([c.v for c in curves], target)
        if coeffs is None:
            raise InternalError(f"triangle {triangle} is not unimodular")
        if min(coeffs) >= 0:
            return _checked(target, [(c, k) for c, k in zip(curves, coeffs) if k > 0])
        logger.debug("decompose %s: step %d at %s has coefficients %s", target, step, triangle, coeffs)
        negative = -sum(k for k in coeffs if k < 0)
        for i, k in enumerate(coeffs):
            if i == newest:
                continue
            penalty = 0 if k < 0 else k + 1
            heapq.heappush(frontier, (depth + 1 + negative + penalty, order, _flip(triangle, i), i, depth + 1))
            order += 1
    raise SearchBoundExceededError(f"no decomposition of {target} within {cap} triangles")


def _checked(target: Vector, parts: list[tuple[CurveVector, int]]) -> list[tuple[CurveVector, int]]:
    total = [0, 0, 0]
    for curve, k in parts:
        for i in range(3):
            total[i] += k * curve.v[i]
    if tuple(total) != target:
        raise InternalError(f"decomposition of {target} sums to {tuple(total)}")
    return parts
