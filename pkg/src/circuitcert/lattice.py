"""Exact simplex geometry: barycentric solves, lattice points, standard forms, Gale duals."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import lcm
from typing import List, Sequence, Tuple

from . import _linalg
from .errors import CircuitError, DegenerateSimplexError
from .poly import CircuitPoly, Exponent, SparsePoly

Matrix = List[List[Fraction]]


def homogenized(points: Sequence[Sequence[int]]) -> List[List[int]]:
    """Columns (1, p) for each point, returned as rows of the matrix."""
    n = len(points[0])
    return [[1] * len(points)] + [[p[i] for p in points] for i in range(n)]


def is_affinely_independent(points: Sequence[Sequence[int]]) -> bool:
    """Rank test on the homogenized points."""
    return _linalg.rank(homogenized(points)) == len(points)


def simplex_det(vertices: Sequence[Sequence[int]]) -> Fraction:
    """Determinant of the homogenized vertex matrix (n+1 vertices in R^n)."""
    return _linalg.det(homogenized(vertices))


def barycentric(vertices: Sequence[Sequence[int]], point: Sequence) -> List[Fraction]:
    """Exact barycentric coordinates; entries may be zero or negative."""
    if simplex_det(vertices) == 0:
        raise DegenerateSimplexError(f"vertices {list(vertices)} do not span a simplex")
    return _linalg.barycentric_coords(vertices, point)


def enumerate_lattice_points(vertices: Sequence[Sequence[int]]) -> List[Exponent]:
    """All integer points of the closed simplex, sorted lexicographically.

    Scans the bounding box and keeps points with nonnegative barycentric
    coordinates.
    """
    vertices = [tuple(v) for v in vertices]
    n = len(vertices[0])
    if len(vertices) != n + 1 or simplex_det(vertices) == 0:
        raise DegenerateSimplexError(f"vertices {vertices} do not span a simplex")
    inv = _linalg.inverse(homogenized(vertices))
    ranges = [range(min(v[i] for v in vertices), max(v[i] for v in vertices) + 1) for i in range(n)]
    out = []
    for pt in product(*ranges):
        vec = (1, *pt)
        if all(sum(a * x for a, x in zip(row, vec)) >= 0 for row in inv):
            out.append(tuple(pt))
    return out


def simplex_split(p: SparsePoly) -> Tuple[Tuple[Exponent, ...], Tuple[Exponent, ...]]:
    """Split the support of ``p`` into simplex vertices and the remaining points.

    Requires the Newton polytope of ``p`` to be a full-dimensional simplex
    whose vertices belong to the support. Vertices come back in term order.
    """
    n = p.n
    support = p.support
    for combo in combinations(range(len(support)), n + 1):
        verts = [support[k] for k in combo]
        if simplex_det(verts) == 0:
            continue
        inv = _linalg.inverse(homogenized(verts))
        rest = [e for k, e in enumerate(support) if k not in combo]
        if all(all(x >= 0 for x in _linalg.matvec(inv, (1, *e))) for e in rest):
            return tuple(verts), tuple(rest)
    raise CircuitError("Newton polytope is not a full-dimensional simplex")


def support_matrix(f: CircuitPoly) -> List[List[int]]:
    """(n+1) x (n+2) integer matrix with columns (1, alpha(0)), ..., (1, alpha(n)), (1, y)."""
    return homogenized(list(f.vertices) + [f.inner])


@dataclass(frozen=True)
class TransformData:
    """Result of a standard-form transformation.

    ``image`` satisfies ``f(e^w) = e^<shift, w> * image(e^(T^t w))``; ``shift``
    is alpha(0) for the standard form and y for the zero standard form.
    """

    T: Tuple[Tuple[Fraction, ...], ...]
    mu: int
    image: SparsePoly
    shift: Exponent

    def to_json_obj(self) -> dict:
        from .poly import format_rational

        return {
            "T": [[format_rational(x) for x in row] for row in self.T],
            "mu": self.mu,
            "shift": list(self.shift),
            "image": self.image.to_json_obj(),
        }


def _columns_to_matrix(cols: Sequence[Sequence], scale: int) -> Tuple[Tuple[Fraction, ...], ...]:
    n = len(cols)
    return tuple(tuple(Fraction(cols[j][i], scale) for j in range(n)) for i in range(n))


def standard_form(f) -> TransformData:
    """Map vertices to 0, mu*e_1, ..., mu*e_n keeping all coefficients.

    Accepts a :class:`CircuitPoly` or a :class:`SparsePoly` whose Newton
    polytope is a simplex with several inner points. In the second case ``mu``
    is the lcm of all barycentric denominators and 2, so the image vertices
    stay even.
    """
    if isinstance(f, CircuitPoly):
        vertices = list(f.vertices)
        inner_pts = [f.inner]
        lams = [list(f.lambdas)]
        mu = f.mu
        base = f.base
    else:
        base = f
        vertices, inner_pts = simplex_split(f)
        vertices = list(vertices)
        lams = [barycentric(vertices, y) for y in inner_pts]
        mu = 2
        for lam in lams:
            for x in lam:
                mu = lcm(mu, x.denominator)
    n = base.n
    a0 = vertices[0]
    edges = [[v[i] - a0[i] for i in range(n)] for v in vertices[1:]]
    T = _columns_to_matrix(edges, mu)
    mapping = {tuple([0] * n): base[vertices[0]]}
    for j, v in enumerate(vertices[1:]):
        e = [0] * n
        e[j] = mu
        mapping[tuple(e)] = base[v]
    for y, lam in zip(inner_pts, lams):
        mapping[tuple(int(mu * x) for x in lam[1:])] = base[y]
    return TransformData(T=T, mu=mu, image=SparsePoly.from_dict(n, mapping), shift=tuple(a0))


def zero_standard_form(f: CircuitPoly) -> TransformData:
    """Move the inner exponent to the origin and the vertices alpha(1..n) to mu*e_j.

    The image vertex alpha(0)'' equals -(mu/lambda_0) * (lambda_1, ..., lambda_n).
    ``mu`` is enlarged (by the smallest integer factor) when that vector would
    not be integral.
    """
    n = f.n
    lam = f.lambdas
    mu = f.mu
    k = 1
    for x in lam[1:]:
        k = lcm(k, (mu * x / lam[0]).denominator)
    mu *= k
    y = f.inner
    edges = [[v[i] - y[i] for i in range(n)] for v in f.vertices[1:]]
    T = _columns_to_matrix(edges, mu)
    mapping = {tuple(int(-mu * x / lam[0]) for x in lam[1:]): f.b[0], tuple([0] * n): f.c}
    for j, bj in enumerate(f.b[1:]):
        e = [0] * n
        e[j] = mu
        mapping[tuple(e)] = bj
    return TransformData(T=T, mu=mu, image=SparsePoly.from_dict(n, mapping), shift=tuple(y))


def gale_dual(M: Sequence[Sequence[int]]) -> List[int]:
    """Primitive integer kernel generator of a circuit support matrix.

    Sign is normalized so the last entry (the inner point) is negative.
    """
    rows = len(M)
    cols = len(M[0])
    if cols != rows + 1 or _linalg.rank(M) != rows:
        raise DegenerateSimplexError("support matrix does not have a one-dimensional kernel")
    (v,) = _linalg.kernel(M)
    w = _linalg.primitive_integer(v)
    if w[-1] > 0:
        w = [-x for x in w]
    return w


__all__ = [
    "TransformData",
    "barycentric",
    "enumerate_lattice_points",
    "gale_dual",
    "homogenized",
    "is_affinely_independent",
    "simplex_det",
    "simplex_split",
    "standard_form",
    "support_matrix",
    "zero_standard_form",
]
