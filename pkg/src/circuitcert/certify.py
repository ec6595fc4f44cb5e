"""Exact nonnegativity decisions for circuit polynomials.

The circuit number is ``Theta = prod_j (b_j / lambda_j) ** lambda_j``. All
sign decisions compare ``|c|`` against it; intervals settle the easy cases
and the integer-power identity ``|c|**mu <= prod (b_j/lambda_j)**(mu*lambda_j)``
settles the rest, so equality is only ever reported from exact arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import product
from math import lcm
from typing import List, Optional, Sequence, Tuple

import mpmath
from mpmath.ctx_iv import MPIntervalContext
from mpmath.ctx_mp import MPContext

from . import _linalg
from .errors import BoundaryInnerPoint, CircuitError, PrecisionError
from .lattice import homogenized, simplex_split
from .poly import CircuitPoly, Exponent, MonomialSquares, SparsePoly, format_rational, is_even, validate_circuit

PRECISION_LADDER = (128, 512, 2048)
ZERO_TOL = 1e-8


class Relation(str, Enum):
    LESS = "Less"
    EQUAL = "Equal"
    GREATER = "Greater"


class Status(str, Enum):
    # kept for completeness of the verdict vocabulary; never produced, see README
    POSITIVE_DEFINITE_ON_CONE = "PositiveDefiniteOnCone"
    NONNEGATIVE = "Nonnegative"
    BOUNDARY = "Boundary"
    NOT_NONNEGATIVE = "NotNonnegative"


@dataclass(frozen=True)
class CircuitNumberCmp:
    relation: Relation
    theta_log: mpmath.mpf
    exactness: str  # "exact" or "interval-certified"
    theta: float = float("nan")  # exp(theta_log), rounded once from working precision


@dataclass(frozen=True)
class NormMinimizer:
    s_star: Tuple[float, ...]
    residual: float


@dataclass(frozen=True)
class NonnegVerdict:
    status: Status
    witness: Optional[Tuple[float, ...]] = None
    zeros: Optional[Tuple[Tuple[float, ...], ...]] = None
    theta_log: Optional[float] = None
    c: Optional[Fraction] = None
    exactness: str = "exact"
    witness_exact: Optional[Tuple[Fraction, ...]] = None
    face: Optional[SparsePoly] = None

    @property
    def is_nonnegative(self) -> bool:
        return self.status in (Status.NONNEGATIVE, Status.BOUNDARY, Status.POSITIVE_DEFINITE_ON_CONE)

    def to_json_obj(self) -> dict:
        out = {
            "status": self.status.value,
            "theta_log": None if self.theta_log is None else float(self.theta_log),
            "c": None if self.c is None else format_rational(self.c),
            "exactness": self.exactness,
        }
        if self.witness is not None:
            out["witness"] = list(self.witness)
        if self.zeros is not None:
            out["zeros"] = [list(z) for z in self.zeros]
        if self.face is not None:
            out["face"] = self.face.to_json_obj()
        return out


# ---------------------------------------------------------------------------
# core data shared by full circuits and face restrictions


@dataclass(frozen=True)
class _Circ:
    """Circuit data on a simplex of any dimension k <= n (vertices affinely independent)."""

    base: SparsePoly
    vertices: Tuple[Exponent, ...]
    inner: Exponent
    lambdas: Tuple[Fraction, ...]
    b: Tuple[Fraction, ...]
    c: Fraction

    @property
    def mu(self) -> int:
        m = 1
        for x in self.lambdas:
            m = lcm(m, x.denominator)
        return m

    @classmethod
    def of(cls, f: CircuitPoly) -> "_Circ":
        return cls(f.base, f.vertices, f.inner, f.lambdas, f.b, f.c)


def _mpf_to_fraction(x) -> Fraction:
    sign, man, exp, _ = x._mpf_
    q = Fraction(int(man)) * (Fraction(2) ** exp)
    return -q if sign else q


def _q(ctx, q: Fraction):
    """Rational to a context number (an enclosure for interval contexts)."""
    q = Fraction(q)
    return ctx.mpf(q.numerator) / q.denominator


def _compare(b: Sequence[Fraction], lam: Sequence[Fraction], c: Fraction, precision: int) -> CircuitNumberCmp:
    mp = MPContext()
    mp.prec = max(precision, 53)
    theta_log = mp.fsum(_q(mp, x) * (mp.log(_q(mp, bj)) - mp.log(_q(mp, x))) for bj, x in zip(b, lam))
    theta = float(mp.exp(theta_log))
    theta_log = mpmath.mpf(theta_log)
    if c == 0:
        return CircuitNumberCmp(Relation.LESS, theta_log, "exact", theta)
    a = abs(c)
    ladder = [p for p in PRECISION_LADDER if p >= precision] or [precision]
    for bits in ladder:
        iv = MPIntervalContext()
        iv.prec = bits
        lhs = iv.log(_q(iv, a))
        rhs = iv.mpf(0)
        for bj, x in zip(b, lam):
            rhs += _q(iv, x) * (iv.log(_q(iv, bj)) - iv.log(_q(iv, x)))
        if lhs.b < rhs.a:
            return CircuitNumberCmp(Relation.LESS, theta_log, "interval-certified", theta)
        if lhs.a > rhs.b:
            return CircuitNumberCmp(Relation.GREATER, theta_log, "interval-certified", theta)
    mu = 1
    for x in lam:
        mu = lcm(mu, x.denominator)
    left = a**mu
    right = Fraction(1)
    for bj, x in zip(b, lam):
        right *= (bj / x) ** int(mu * x)
    rel = Relation.LESS if left < right else Relation.GREATER if left > right else Relation.EQUAL
    return CircuitNumberCmp(rel, theta_log, "exact", theta)


def _minimizer(circ: _Circ, bits: int = 128):
    """Least-norm solution of <s, alpha(j) - alpha(0)> = log(lambda_j b_0 / (lambda_0 b_j)).

    For a full-dimensional simplex this is the unique solution. Returns the
    mp vector and the residual.
    """
    mp = MPContext()
    mp.prec = bits
    v0 = circ.vertices[0]
    n = len(v0)
    k = len(circ.vertices) - 1
    if k == 0:
        return [mp.mpf(0)] * n, mp.mpf(0), mp
    lam, b = circ.lambdas, circ.b
    A = mp.matrix([[v[i] - v0[i] for i in range(n)] for v in circ.vertices[1:]])
    r = mp.matrix(
        [mp.log(_q(mp, lam[j] * b[0] / (lam[0] * b[j]))) for j in range(1, k + 1)]
    )
    if k == n:
        s = mp.lu_solve(A, r)
    else:
        s = A.T * mp.lu_solve(A * A.T, r)
    res = max(abs(x) for x in (A * s - r)) if k else mp.mpf(0)
    return [s[i] for i in range(n)], res, mp


def norm_minimizer(f: CircuitPoly, bits: int = 128) -> NormMinimizer:
    """Point s* in log coordinates where the vertex terms balance (independent of c)."""
    s, res, _ = _minimizer(_Circ.of(f), bits)
    return NormMinimizer(tuple(float(x) for x in s), float(res))


def _sign_vector(circ: _Circ) -> List[int]:
    """Signs making c * v^y negative; all +1 when c < 0."""
    sigma = [1] * len(circ.inner)
    if circ.c > 0:
        j = next(i for i, e in enumerate(circ.inner) if e % 2)
        sigma[j] = -1
    return sigma


def _exposing_direction(vertices: Sequence[Exponent], face: Sequence[int]) -> List[Fraction]:
    """u with <u, alpha> equal on the face vertices and one smaller on the others."""
    n = len(vertices[0])
    rows = [list(v) + [1] for v in vertices]
    rhs = [0 if k in face else -1 for k in range(len(vertices))]
    sol = _linalg.solve(rows, rhs)
    return sol[:n]


def _find_witness(target: SparsePoly, circ: _Circ, precision: int, direction=None):
    """Negative point of ``target`` near sigma * e^{s*}; exact check at a rational point.

    ``direction`` pushes toward the face when ``circ`` is a face restriction.
    """
    sigma = _sign_vector(circ)
    ladder = [p for p in PRECISION_LADDER if p >= precision] or [precision]
    for bits in ladder:
        s, _, mp = _minimizer(circ, bits)
        for t in ([0] if direction is None else [2**k for k in range(12)]):
            shift = [0] * len(s) if direction is None else [t * float(u) for u in direction]
            pts_mp = [sg * mp.exp(x + d) for sg, x, d in zip(sigma, s, shift)]
            candidates = []
            try:
                candidates.append(tuple(Fraction(float(x)) for x in pts_mp))
            except OverflowError:
                pass
            candidates.append(tuple(_mpf_to_fraction(x) for x in pts_mp))
            for pt in candidates:
                if target.evaluate(pt) < 0:
                    return tuple(float(x) for x in pt), pt
    raise PrecisionError("could not verify a negative witness at the highest precision")


def compare_c_theta(f: CircuitPoly, precision: int = 128) -> CircuitNumberCmp:
    """Decide |c| against the circuit number."""
    return _compare(f.b, f.lambdas, f.c, precision)


def _verdict_from_cmp(circ: _Circ, cmp: CircuitNumberCmp) -> Status:
    c = circ.c
    if is_even(circ.inner):
        if c >= 0 or cmp.relation is Relation.LESS:
            return Status.NONNEGATIVE
        return Status.BOUNDARY if cmp.relation is Relation.EQUAL else Status.NOT_NONNEGATIVE
    if cmp.relation is Relation.LESS:
        return Status.NONNEGATIVE
    return Status.BOUNDARY if cmp.relation is Relation.EQUAL else Status.NOT_NONNEGATIVE


def decide_nonnegativity(f, precision: int = 128) -> NonnegVerdict:
    """Nonnegativity of a circuit polynomial with witness or zeros attached."""
    if isinstance(f, MonomialSquares):
        return NonnegVerdict(Status.NONNEGATIVE, c=Fraction(0))
    circ = _Circ.of(f)
    cmp = _compare(circ.b, circ.lambdas, circ.c, precision)
    status = _verdict_from_cmp(circ, cmp)
    common = dict(theta_log=float(cmp.theta_log), c=circ.c, exactness=cmp.exactness)
    if status is Status.NOT_NONNEGATIVE:
        w, w_exact = _find_witness(f.base, circ, precision)
        return NonnegVerdict(status, witness=w, witness_exact=w_exact, **common)
    if status is Status.BOUNDARY:
        return NonnegVerdict(status, zeros=tuple(enumerate_boundary_zeros(f, _checked=True)), **common)
    return NonnegVerdict(status, **common)


def a_discriminant_vanishes(f: CircuitPoly) -> bool:
    """True exactly on the boundary of the nonnegativity region."""
    cmp = compare_c_theta(f)
    if cmp.relation is not Relation.EQUAL:
        return False
    return f.c < 0 if is_even(f.inner) else True


def enumerate_boundary_zeros(f: CircuitPoly, _checked: bool = False) -> List[Tuple[float, ...]]:
    """All affine real zeros sigma * e^{s*} of a boundary circuit polynomial."""
    if not _checked and not a_discriminant_vanishes(f):
        raise CircuitError("polynomial is not on the boundary; it has no zeros of this form")
    s, _, mp = _minimizer(_Circ.of(f), 128)
    mods = [mp.exp(x) for x in s]
    sgn_c = 1 if f.c > 0 else -1
    zeros = []
    for sigma in product((1, -1), repeat=f.n):
        par = 1
        for sg, e in zip(sigma, f.inner):
            if e % 2 and sg < 0:
                par = -par
        if sgn_c * par != -1:
            continue
        pt = [sg * m for sg, m in zip(sigma, mods)]
        value = f.base.evaluate(pt)
        scale = mp.fsum(abs(_q(mp, q) * mp.fprod(x**e for x, e in zip(pt, exp)))
                        for exp, q in f.base.terms)
        if abs(value) > ZERO_TOL * scale:
            raise PrecisionError(f"zero candidate {sigma} fails verification")
        zeros.append(tuple(float(x) for x in pt))
    return zeros


# ---------------------------------------------------------------------------
# boundary inner points and general entry point


def _split_with_inner(p: SparsePoly, inner: Optional[Exponent]):
    if inner is None:
        vertices, rest = simplex_split(p)
        if len(rest) != 1:
            raise CircuitError(f"expected exactly one inner term, found {len(rest)}")
        return list(vertices), rest[0]
    inner = tuple(inner)
    others = p.support if inner not in p else tuple(e for e in p.support if e != inner)
    if len(others) == p.n + 1:
        return list(others), inner
    # inner coincides with a vertex and the terms were merged
    vertices, rest = simplex_split(p)
    if rest:
        raise CircuitError("cannot identify the simplex vertices")
    return list(vertices), inner


def _face_of(p: SparsePoly, inner: Optional[Exponent] = None):
    vertices, y = _split_with_inner(p, inner)
    lam = _linalg.barycentric_coords(vertices, y)
    if any(x < 0 for x in lam):
        raise CircuitError("inner exponent lies outside the simplex")
    if all(x > 0 for x in lam):
        raise CircuitError("inner exponent is strictly interior; nothing to reduce")
    face = [k for k, x in enumerate(lam) if x > 0]
    return vertices, y, lam, face


def reduce_boundary_inner_point(p: SparsePoly, inner: Optional[Exponent] = None) -> SparsePoly:
    """Restriction of ``p`` to the smallest face of its simplex that contains the inner exponent.

    ``inner`` is only needed when the inner exponent coincides with a vertex
    (so its term has been merged) or is otherwise ambiguous.
    """
    vertices, y, _, face = _face_of(p, inner)
    keep = {vertices[k] for k in face} | {y}
    return SparsePoly.from_dict(p.n, {e: q for e, q in p.terms if e in keep}, allow_empty=True)


def _decide_face(p: SparsePoly, precision: int, inner: Optional[Exponent] = None) -> NonnegVerdict:
    vertices, y, lam, face = _face_of(p, inner)
    restriction = reduce_boundary_inner_point(p, inner)
    face_vertices = tuple(vertices[k] for k in face)
    if y in face_vertices:
        # the inner term merged into a vertex: sign of one coefficient decides
        a = p[y]
        if a >= 0:
            return NonnegVerdict(Status.NONNEGATIVE, c=a, face=restriction)
        circ = _Circ(restriction, (y,), y, (Fraction(1),), (Fraction(1),), a - 1)
        status = Status.NOT_NONNEGATIVE
        cmp = None
    else:
        circ = _Circ(
            restriction,
            face_vertices,
            y,
            tuple(lam[k] for k in face),
            tuple(p[v] for v in face_vertices),
            p[y],
        )
        if not all(is_even(v) for v in face_vertices) or any(x <= 0 for x in circ.b):
            raise CircuitError("face restriction is not a circuit polynomial with even positive vertices")
        cmp = _compare(circ.b, circ.lambdas, circ.c, precision)
        status = _verdict_from_cmp(circ, cmp)
    common = dict(c=p[y], face=restriction)
    if cmp is not None:
        common.update(theta_log=float(cmp.theta_log), exactness=cmp.exactness)
    if status is Status.NOT_NONNEGATIVE:
        u = _exposing_direction(vertices, face)
        w, w_exact = _find_witness(p, circ, precision, direction=u)
        return NonnegVerdict(status, witness=w, witness_exact=w_exact, **common)
    # affine zeros of the face polynomial are not zeros of p in general; only report nonnegativity
    return NonnegVerdict(Status.NONNEGATIVE, **common)


def certify(p, precision: int = 128) -> NonnegVerdict:
    """Nonnegativity of a polynomial supported on a simplex plus at most one other point.

    Accepts a :class:`SparsePoly`, :class:`CircuitPoly` or :class:`MonomialSquares`.
    Boundary inner points are reduced to their face first.
    """
    if isinstance(p, (CircuitPoly, MonomialSquares)):
        return decide_nonnegativity(p, precision)
    try:
        f = validate_circuit(p)
    except BoundaryInnerPoint as exc:
        return _decide_face(p, precision, exc.inner)
    except CircuitError:
        # n+1 even simplex vertices with a negative coefficient: a vertex term dominates
        if len(p) == p.n + 1 and all(is_even(e) for e in p.support):
            neg = [e for e, q in p.terms if q < 0]
            if neg and _linalg.rank(homogenized(p.support)) == p.n + 1:
                return _decide_face(p, precision, inner=neg[0])
        raise
    return decide_nonnegativity(f, precision)


__all__ = [
    "CircuitNumberCmp",
    "NonnegVerdict",
    "NormMinimizer",
    "Relation",
    "Status",
    "a_discriminant_vanishes",
    "certify",
    "compare_c_theta",
    "decide_nonnegativity",
    "enumerate_boundary_zeros",
    "norm_minimizer",
    "reduce_boundary_inner_point",
]
