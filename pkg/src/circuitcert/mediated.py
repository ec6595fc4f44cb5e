"""Maximal mediated sets and the combinatorial SOS test for circuit polynomials."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import reduce
from math import gcd
from typing import FrozenSet, Iterable, Optional, Sequence, Tuple

from .certify import certify
from .errors import CircuitError, DegenerateSimplexError
from .lattice import enumerate_lattice_points, simplex_det
from .poly import CircuitPoly, Exponent, is_even


class SimplexClass(str, Enum):
    H = "H"
    M = "M"
    INTERMEDIATE = "Intermediate"


class Sufficiency(str, Enum):
    BOUNDARY = "SufficientByBoundary"
    DILATE = "SufficientByDilate"
    INCONCLUSIVE = "Inconclusive"


def _sorted(points: Iterable[Exponent]) -> Tuple[Exponent, ...]:
    return tuple(sorted(points))


@dataclass(frozen=True)
class MediatedSetResult:
    vertices: Tuple[Exponent, ...]
    delta_star: FrozenSet[Exponent]
    a_hat_delta: FrozenSet[Exponent]
    all_points: FrozenSet[Exponent]
    classification: SimplexClass

    def to_json_obj(self) -> dict:
        return {
            "vertices": [list(v) for v in self.vertices],
            "classification": self.classification.value,
            "delta_star": [list(p) for p in _sorted(self.delta_star)],
            "a_hat_delta": [list(p) for p in _sorted(self.a_hat_delta)],
            "lattice_points": len(self.all_points),
        }


def averages(points: Iterable[Exponent]):
    """Integer midpoints of even pairs: (A, A_bar) with A_bar restricted to distinct pairs."""
    evens = sorted({tuple(p) for p in points if is_even(p)})
    a, a_bar = set(), set()
    for i, s in enumerate(evens):
        a.add(s)
        for t in evens[i + 1:]:
            # both coordinates even, so the midpoint is integral
            mid = tuple((x + y) // 2 for x, y in zip(s, t))
            a.add(mid)
            a_bar.add(mid)
    return frozenset(a), frozenset(a_bar)


def _is_mediated(beta: Exponent, evens: set) -> bool:
    double = tuple(2 * x for x in beta)
    for s in evens:
        if s == beta:
            continue
        if tuple(d - x for d, x in zip(double, s)) in evens:
            return True
    return False


def mediated_fixpoint(points: Iterable[Exponent], vertices: Iterable[Exponent]) -> FrozenSet[Exponent]:
    """Largest subset of ``points`` containing ``vertices`` in which every other point is mediated.

    Deletes non-mediated points until nothing changes. Deletion is monotone,
    so the result does not depend on the sweep order.
    """
    fixed = {tuple(v) for v in vertices}
    current = {tuple(p) for p in points} | fixed
    while True:
        evens = {p for p in current if is_even(p)}
        drop = {p for p in current if p not in fixed and not _is_mediated(p, evens)}
        if not drop:
            return frozenset(current)
        current -= drop


def is_mediated_set(points: Iterable[Exponent], vertices: Iterable[Exponent]) -> bool:
    current = {tuple(p) for p in points}
    fixed = {tuple(v) for v in vertices}
    evens = {p for p in current if is_even(p)}
    return fixed <= current and all(p in fixed or _is_mediated(p, evens) for p in current)


def _check_even_simplex(vertices: Sequence[Exponent]) -> Tuple[Exponent, ...]:
    vertices = tuple(tuple(v) for v in vertices)
    n = len(vertices[0])
    if len(vertices) != n + 1 or simplex_det(vertices) == 0:
        raise DegenerateSimplexError(f"{list(vertices)} is not a full-dimensional simplex")
    if not all(is_even(v) for v in vertices):
        raise CircuitError("simplex vertices must be even")
    return vertices


def maximal_mediated_set(vertices: Sequence[Exponent]) -> MediatedSetResult:
    """Delta* of an even simplex together with its H/M classification."""
    vertices = _check_even_simplex(vertices)
    pts = frozenset(enumerate_lattice_points(vertices))
    star = mediated_fixpoint(pts, vertices)
    a_hat, _ = averages(vertices)
    if star == pts:
        cls = SimplexClass.H
    elif star == a_hat:
        cls = SimplexClass.M
    else:
        cls = SimplexClass.INTERMEDIATE
    return MediatedSetResult(vertices, star, a_hat, pts, cls)


@dataclass(frozen=True)
class SosResult:
    sos: bool
    reason: str
    binomial_squares: Optional[int] = None

    def to_json_obj(self) -> dict:
        return {"sos": self.sos, "reason": self.reason, "binomial_squares": self.binomial_squares}


def is_sos(f: CircuitPoly, mediated: Optional[MediatedSetResult] = None) -> SosResult:
    """SOS membership of a nonnegative circuit polynomial via Delta*.

    Returns ``sos=False`` with reason "not nonnegative" when ``f`` is not
    nonnegative in the first place.
    """
    if f.c > 0 and is_even(f.inner):
        return SosResult(True, "sum of monomial squares")
    if not certify(f).is_nonnegative:
        return SosResult(False, "not nonnegative")
    mediated = mediated or maximal_mediated_set(f.vertices)
    if f.inner in mediated.delta_star:
        return SosResult(True, "y in Delta*", len(mediated.delta_star) - len(f.vertices))
    return SosResult(False, "y not in Delta*")


def _half(vertices: Sequence[Exponent]):
    return [tuple(x // 2 for x in v) for v in vertices]


def half_boundary_points_2d(vertices: Sequence[Exponent]) -> int:
    """Lattice points on the boundary of (1/2)Delta for a triangle, by edge gcds."""
    h = _half(vertices)
    total = 0
    for i in range(3):
        p, q = h[i], h[(i + 1) % 3]
        total += gcd(q[0] - p[0], q[1] - p[1])
    return total


def dilate_factor(vertices: Sequence[Exponent]) -> int:
    """Largest M with (1/2)Delta a lattice translate of M times a lattice simplex."""
    h = _half(vertices)
    return reduce(gcd, (x - y for v in h[1:] for x, y in zip(v, h[0])), 0)


def h_simplex_sufficient_2d(vertices: Sequence[Exponent]) -> Sufficiency:
    """Cheap sufficient conditions for an H-simplex.

    The boundary count applies in the plane only; the dilate test in any
    dimension. The boundary test takes precedence.
    """
    vertices = _check_even_simplex(vertices)
    n = len(vertices[0])
    if n == 2 and half_boundary_points_2d(vertices) >= 4:
        return Sufficiency.BOUNDARY
    if dilate_factor(vertices) >= n:
        return Sufficiency.DILATE
    return Sufficiency.INCONCLUSIVE


__all__ = [
    "MediatedSetResult",
    "SimplexClass",
    "SosResult",
    "Sufficiency",
    "averages",
    "dilate_factor",
    "h_simplex_sufficient_2d",
    "half_boundary_points_2d",
    "is_mediated_set",
    "is_sos",
    "maximal_mediated_set",
    "mediated_fixpoint",
]
