"""Convexity of circuit polynomials: univariate, binary forms, and n >= 2.

Verdicts come from exact rules. Every NotConvex verdict carries a rational
witness point where some principal minor of the Hessian is negative, when
one can be found by the searches below.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy
from scipy.optimize import linprog

from .errors import CircuitCertError, ShapeError
from .poly import CircuitPoly, Exponent, SparsePoly, format_rational, validate_circuit


class Convexity(str, Enum):
    CONVEX = "Convex"
    NOT_CONVEX = "NotConvex"
    UNKNOWN = "Unknown"


class Reason(str, Enum):
    UNIVARIATE = "univariate-rule"
    BINARY_FORM = "binary-form-rule"
    MULTIVARIATE = "multivariate-theorem"


@dataclass(frozen=True)
class ConvexityVerdict:
    status: Convexity
    reason: Reason
    witness: Optional[Tuple[Fraction, ...]] = None
    note: str = ""

    def to_json_obj(self) -> dict:
        return {
            "note": self.note,
            "reason": self.reason.value,
            "status": self.status.value,
            "witness": None if self.witness is None else [format_rational(x) for x in self.witness],
        }


# ---------------------------------------------------------------------------
# exact polynomial helpers (dict form: exponent -> Fraction)

Poly = Dict[Exponent, Fraction]


def _as_dict(p: SparsePoly) -> Poly:
    return dict(p.terms)


def derivative(p: Poly, i: int) -> Poly:
    out: Poly = {}
    for e, q in p.items():
        if e[i]:
            d = list(e)
            d[i] -= 1
            out[tuple(d)] = out.get(tuple(d), Fraction(0)) + q * e[i]
    return {e: q for e, q in out.items() if q}


def _mul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = out.get(e, Fraction(0)) + c1 * c2
    return {e: c for e, c in out.items() if c}


def _sub(p: Poly, q: Poly) -> Poly:
    out = dict(p)
    for e, c in q.items():
        out[e] = out.get(e, Fraction(0)) - c
    return {e: c for e, c in out.items() if c}


def _eval(p: Poly, x: Sequence[Fraction]) -> Fraction:
    total = Fraction(0)
    for e, q in p.items():
        term = q
        for xi, k in zip(x, e):
            term *= xi**k
        total += term
    return total


def hessian(p: Poly, n: int) -> List[List[Poly]]:
    first = [derivative(p, i) for i in range(n)]
    return [[derivative(first[i], j) for j in range(n)] for i in range(n)]


def principal_minor_2x2(h: List[List[Poly]], i: int, j: int) -> Poly:
    return _sub(_mul(h[i][i], h[j][j]), _mul(h[i][j], h[j][i]))


def _psd_at(h: List[List[Poly]], x: Sequence[Fraction]) -> bool:
    """Exact PSD test of the Hessian at x via all principal minors (n <= 3 in practice)."""
    n = len(h)
    m = [[_eval(h[i][j], x) for j in range(n)] for i in range(n)]
    mat = sympy.Matrix(n, n, lambda i, j: sympy.Rational(m[i][j].numerator, m[i][j].denominator))
    for k in range(1, n + 1):
        for idx in combinations(range(n), k):
            if mat.extract(list(idx), list(idx)).det() < 0:
                return False
    return True


def _univariate_nonnegative(p: Poly) -> Tuple[bool, Optional[Fraction]]:
    """Exact global nonnegativity of a univariate polynomial; returns a negative point if not."""
    if not p:
        return True, None
    x = sympy.Symbol("x")
    expr = sum(sympy.Rational(q.numerator, q.denominator) * x ** e[0] for e, q in p.items())
    poly = sympy.Poly(expr, x)
    roots = sorted(set(sympy.real_roots(poly)), key=lambda r: float(r))
    probes = [Fraction(0)]
    if roots:
        lo = sympy.floor(roots[0]) - 1
        hi = sympy.ceiling(roots[-1]) + 1
        probes = [Fraction(int(lo)), Fraction(int(hi))]
        for a, b in zip(roots, roots[1:]):
            lo_f, hi_f = float(a), float(b)
            mid = (lo_f + hi_f) / 2
            for den in (1, 10, 100, 10**4, 10**8, None):
                t = Fraction(mid) if den is None else Fraction(mid).limit_denominator(den)
                if lo_f < t < hi_f:
                    break
            probes.append(t)
    for t in probes:
        if _eval(p, (t,)) < 0:
            return False, t
    return True, None


def _search_points(n: int, charts: bool = True):
    """Rational probe points: powers of two with signs, small and large."""
    scales = [Fraction(2) ** k for k in range(-12, 13)]
    for s in scales:
        for sign in (1, -1):
            if n == 1:
                yield (sign * s,)
            else:
                yield (sign * s, Fraction(1))
                if charts:
                    yield (Fraction(1), sign * s)


# ---------------------------------------------------------------------------
# shapes


def _univariate_shape(p: SparsePoly):
    if p.n != 1 or len(p) != 3:
        return None
    exps = [e[0] for e in p.support]
    if exps[0] != 0:
        return None
    y, top = exps[1], exps[2]
    if top % 2 or not 0 < y < top or p[(top,)] <= 0:
        return None
    return p[(y,)], y, top // 2, p[(top,)]


def _binary_form_shape(p: SparsePoly):
    """Match z^{2d} + a x^y z^{2d-y} + b x^{2d} with x = x1, z = x2 (after scaling z^{2d} to 1)."""
    if p.n != 2 or len(p) != 3:
        return None
    degs = {sum(e) for e in p.support}
    if len(degs) != 1:
        return None
    deg = degs.pop()
    if deg % 2 or deg == 0:
        return None
    zz, xx = (0, deg), (deg, 0)
    if zz not in p or xx not in p or p[zz] <= 0 or p[xx] <= 0:
        return None
    (mid,) = [e for e in p.support if e not in (zz, xx)]
    scale = p[zz]
    return p[mid] / scale, mid[0], deg // 2, p[xx] / scale


def binary_form_bound(y: int, d: int) -> Fraction:
    return Fraction((y - 1) * (2 * d - y - 1), y * (2 * d - y))


# ---------------------------------------------------------------------------
# deciders


def _univariate(p: SparsePoly, a: Fraction, y: int, d: int, b: Fraction) -> ConvexityVerdict:
    if y == 1 or (a >= 0 and y % 2 == 0):
        return ConvexityVerdict(Convexity.CONVEX, Reason.UNIVARIATE)
    second = derivative(derivative(_as_dict(p), 0), 0)
    witness = next((x for x in _search_points(1) if _eval(second, x) < 0), None)
    return ConvexityVerdict(Convexity.NOT_CONVEX, Reason.UNIVARIATE, witness)


def _binary_form(p: SparsePoly, a: Fraction, y: int, d: int, b: Fraction) -> ConvexityVerdict:
    h = hessian(_as_dict(p), 2)
    if d == 1:
        # quadratic form z^2 + a x z + b x^2: the Hessian is constant, PSD iff a^2 <= 4b
        if a * a <= 4 * b:
            return ConvexityVerdict(Convexity.CONVEX, Reason.BINARY_FORM, note="quadratic form with a^2 <= 4b")
        return ConvexityVerdict(Convexity.NOT_CONVEX, Reason.BINARY_FORM, (Fraction(0), Fraction(1)), "quadratic form with a^2 > 4b")
    if y % 2 or a < 0:
        witness = next((x for x in _search_points(2) if not _psd_at(h, x)), None)
        note = "never convex for y = 1" if y == 1 else ""
        return ConvexityVerdict(Convexity.NOT_CONVEX, Reason.BINARY_FORM, witness, note)
    bound = binary_form_bound(y, d)
    if a > bound:
        return ConvexityVerdict(Convexity.UNKNOWN, Reason.BINARY_FORM, note=f"a exceeds the sufficient bound {bound}")
    # inside the sufficient range: the diagonal entries are sums of even monomials with
    # nonnegative coefficients; the determinant still has to be checked (it depends on b)
    det = principal_minor_2x2(h, 0, 1)
    dehom: Poly = {}
    for e, q in det.items():
        dehom[(e[0],)] = dehom.get((e[0],), Fraction(0)) + q
    ok, t = _univariate_nonnegative({e: q for e, q in dehom.items() if q})
    if ok:
        return ConvexityVerdict(Convexity.CONVEX, Reason.BINARY_FORM, note=f"0 <= a <= {bound}")
    return ConvexityVerdict(
        Convexity.NOT_CONVEX,
        Reason.BINARY_FORM,
        (t, Fraction(1)),
        note="Hessian determinant takes negative values; the bound on a alone is not sufficient for this b",
    )


def _negative_vertex_direction(poly: Poly) -> Optional[Tuple[Exponent, List[int]]]:
    """A Newton-polytope vertex with negative coefficient and an integer direction exposing it."""
    exps = list(poly)
    for e in sorted(exps):
        if poly[e] >= 0:
            continue
        others = [o for o in exps if o != e]
        if not others:
            return e, [0] * len(e)
        n = len(e)
        # <u, o - e> <= -1 for all others; u = u_plus - u_minus with minimal l1 norm
        D = np.array([[oi - ei for oi, ei in zip(o, e)] for o in others], dtype=float)
        res = linprog(
            np.ones(2 * n),
            A_ub=np.hstack([D, -D]),
            b_ub=-np.ones(len(others)),
            bounds=[(0, None)] * (2 * n),
            method="highs",
        )
        if not res.success:
            continue
        raw = [Fraction(a - b).limit_denominator(64) for a, b in zip(res.x[:n], res.x[n:])]
        den = 1
        for r in raw:
            den = den * r.denominator // gcd(den, r.denominator)
        u = [int(r * den) for r in raw]
        if all(sum(ui * (oi - ei) for ui, oi, ei in zip(u, o, e)) < 0 for o in others):
            return e, u
    return None


def _multivariate_witness(f: SparsePoly) -> Optional[Tuple[Fraction, ...]]:
    n = f.n
    h = hessian(_as_dict(f), n)
    candidates = [h[i][i] for i in range(n)] + [principal_minor_2x2(h, i, j) for i, j in combinations(range(n), 2)]
    for minor in candidates:
        found = _negative_vertex_direction(minor)
        if found is None:
            continue
        _, u = found
        for k in range(1, 64):
            x = tuple(Fraction(2) ** (k * ui) if ui >= 0 else Fraction(1, 2 ** (-k * ui)) for ui in u)
            if _eval(minor, x) < 0:
                return x
    return None


def is_convex(p) -> ConvexityVerdict:
    """Convexity verdict for a univariate circuit, a binary form, or a circuit polynomial in n >= 2."""
    if isinstance(p, CircuitPoly):
        p = p.base
    shape = _univariate_shape(p)
    if shape is not None:
        return _univariate(p, *shape)
    shape = _binary_form_shape(p)
    if shape is not None:
        return _binary_form(p, *shape)
    if p.n >= 2:
        try:
            f = validate_circuit(p)
        except CircuitCertError as exc:
            raise ShapeError(f"not a circuit polynomial: {exc}") from None
        if isinstance(f, CircuitPoly):
            return ConvexityVerdict(Convexity.NOT_CONVEX, Reason.MULTIVARIATE, _multivariate_witness(p))
    raise ShapeError("expected 1 + a x^y + b x^(2d), z^(2d) + a x^y z^(2d-y) + b x^(2d), or a circuit polynomial")


__all__ = [
    "Convexity",
    "ConvexityVerdict",
    "Reason",
    "binary_form_bound",
    "derivative",
    "hessian",
    "is_convex",
    "principal_minor_2x2",
]
