"""Agiforms on even lattice polygons: triangulations and the universal SOS criterion.

Polygon vertices are stored counter-clockwise starting from the
lexicographically smallest one; triangulations refer to that order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import atan2
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .errors import CircuitError, ShapeError
from .mediated import maximal_mediated_set, mediated_fixpoint
from .poly import Exponent, is_even

MAX_VERTICES = 14

Triangle = Tuple[int, int, int]
Triangulation = Tuple[Triangle, ...]


def _cross(o, a, b) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _ccw_order(points: Sequence[Exponent]) -> List[Exponent]:
    cx = sum(p[0] for p in points) / len(points)
    cy = sum(p[1] for p in points) / len(points)
    pts = sorted(points, key=lambda p: atan2(p[1] - cy, p[0] - cx))
    k = pts.index(min(pts))
    return pts[k:] + pts[:k]


@dataclass(frozen=True)
class PolygonSupport:
    vertices: Tuple[Exponent, ...]
    inner: Exponent

    @classmethod
    def create(cls, vertices: Sequence[Sequence[int]], inner: Sequence[int]) -> "PolygonSupport":
        """Validate and canonicalize: even vertices in strictly convex position, inner point interior."""
        pts = [tuple(int(x) for x in v) for v in vertices]
        if any(len(p) != 2 for p in pts) or len(inner) != 2:
            raise ShapeError("polygon supports live in two dimensions")
        if len(set(pts)) != len(pts):
            raise ShapeError("repeated vertex")
        if len(pts) < 3:
            raise ShapeError("a polygon needs at least three vertices")
        if len(pts) > MAX_VERTICES:
            raise ShapeError(f"at most {MAX_VERTICES} vertices are supported")
        if not all(is_even(p) for p in pts):
            raise CircuitError("polygon vertices must be even")
        ordered = _ccw_order(pts)
        m = len(ordered)
        for i in range(m):
            if _cross(ordered[i], ordered[(i + 1) % m], ordered[(i + 2) % m]) <= 0:
                raise ShapeError("vertices are not in strictly convex position")
        y = tuple(int(x) for x in inner)
        for i in range(m):
            if _cross(ordered[i], ordered[(i + 1) % m], y) <= 0:
                raise CircuitError(f"{y} is not in the interior of the polygon")
        return cls(tuple(ordered), y)

    @property
    def m(self) -> int:
        return len(self.vertices)


def polygon_lattice_points(vertices: Sequence[Exponent], interior_only: bool = False) -> List[Exponent]:
    """Lattice points of a convex counter-clockwise polygon (closed unless ``interior_only``)."""
    m = len(vertices)
    xs = [v[0] for v in vertices]
    ys = [v[1] for v in vertices]
    out = []
    for x in range(min(xs), max(xs) + 1):
        for y in range(min(ys), max(ys) + 1):
            signs = [_cross(vertices[i], vertices[(i + 1) % m], (x, y)) for i in range(m)]
            if all(s > 0 for s in signs) if interior_only else all(s >= 0 for s in signs):
                out.append((x, y))
    return out


def interior_lattice_points(poly: PolygonSupport) -> List[Exponent]:
    return polygon_lattice_points(poly.vertices, interior_only=True)


@lru_cache(maxsize=None)
def _triangulate(indices: Tuple[int, ...]) -> Tuple[Triangulation, ...]:
    if len(indices) < 3:
        return ((),)
    first, last = indices[0], indices[-1]
    out = []
    for k in range(1, len(indices) - 1):
        apex = indices[k]
        for left in _triangulate(indices[: k + 1]):
            for right in _triangulate(indices[k:]):
                out.append(tuple(sorted(left + right + ((first, apex, last),))))
    return tuple(out)


def enumerate_triangulations(poly: PolygonSupport) -> List[Triangulation]:
    """All triangulations of the convex polygon using only its vertices, sorted."""
    if poly.m > MAX_VERTICES:
        raise ShapeError(f"at most {MAX_VERTICES} vertices are supported")
    return sorted(_triangulate(tuple(range(poly.m))))


def triangle_contains(tri: Sequence[Exponent], y: Exponent) -> bool:
    """Closed containment; y on an edge counts."""
    a, b, c = tri
    s = [_cross(a, b, y), _cross(b, c, y), _cross(c, a, y)]
    return all(x >= 0 for x in s) or all(x <= 0 for x in s)


def polygon_area2(vertices: Sequence[Exponent]) -> int:
    """Twice the signed area (shoelace)."""
    m = len(vertices)
    return sum(vertices[i][0] * vertices[(i + 1) % m][1] - vertices[(i + 1) % m][0] * vertices[i][1] for i in range(m))


@dataclass(frozen=True)
class TriangulationCheck:
    index: int
    triangulation: Triangulation
    containing: Tuple[Triangle, ...]
    flags: Tuple[bool, ...]

    def to_json_obj(self) -> dict:
        return {
            "containing": [list(t) for t in self.containing],
            "flags": list(self.flags),
            "id": self.index,
            "triangles": [list(t) for t in self.triangulation],
        }


@dataclass(frozen=True)
class CriterionReport:
    universal_sos: bool
    per_triangulation: Tuple[TriangulationCheck, ...]

    def to_json_obj(self) -> dict:
        return {
            "per_triangulation": [t.to_json_obj() for t in self.per_triangulation],
            "universal_sos": self.universal_sos,
        }


def universal_sos_criterion(poly: PolygonSupport) -> CriterionReport:
    """Every agiform on (Q, y) is SOS iff y lies in Delta* of each triangle containing it."""
    stars: Dict[Triangle, FrozenSet[Exponent]] = {}
    checks = []
    for idx, tri in enumerate(enumerate_triangulations(poly)):
        containing, flags = [], []
        for t in tri:
            pts = [poly.vertices[i] for i in t]
            if not triangle_contains(pts, poly.inner):
                continue
            if t not in stars:
                stars[t] = maximal_mediated_set(pts).delta_star
            containing.append(t)
            flags.append(poly.inner in stars[t])
        checks.append(TriangulationCheck(idx, tri, tuple(containing), tuple(flags)))
    ok = all(all(c.flags) for c in checks)
    return CriterionReport(ok, tuple(checks))


def q_star(poly: PolygonSupport) -> FrozenSet[Exponent]:
    """Maximal V(Q)-mediated subset of the lattice points of Q."""
    return mediated_fixpoint(polygon_lattice_points(poly.vertices), poly.vertices)


def necessity_check_sos(poly: PolygonSupport, lambdas: Optional[Sequence[Fraction]] = None) -> bool:
    """Whether y lies in Q*; False rules out SOS for every agiform on (Q, y).

    ``lambdas``, if given, must be convex weights on the vertices with
    barycenter y; they do not affect the answer.
    """
    if lambdas is not None:
        lam = [Fraction(x) for x in lambdas]
        if len(lam) != poly.m or any(x < 0 for x in lam) or sum(lam) != 1:
            raise ShapeError("lambdas must be convex weights, one per vertex")
        point = tuple(sum(x * v[i] for x, v in zip(lam, poly.vertices)) for i in range(2))
        if point != poly.inner:
            raise ShapeError("lambdas do not reproduce the inner point")
    return poly.inner in q_star(poly)


__all__ = [
    "CriterionReport",
    "PolygonSupport",
    "TriangulationCheck",
    "enumerate_triangulations",
    "interior_lattice_points",
    "necessity_check_sos",
    "polygon_area2",
    "polygon_lattice_points",
    "q_star",
    "triangle_contains",
    "universal_sos_criterion",
]
