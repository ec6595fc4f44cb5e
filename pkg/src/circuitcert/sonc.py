"""SONC certificates for polynomials on an even simplex with several inner terms.

Synthesis follows the minimizer construction: at the positive global
minimizer v of ``h = p / x^alpha(0)`` every inner term a_i x^y(i) gets the
vertex shares ``|a_i| lambda_k v^(y(i) - alpha(k))``, each share set forms a
circuit polynomial that vanishes at v, and what is left over sits on the
vertex alpha(0) with value h(v) >= 0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from . import _linalg
from .certify import Relation, certify, compare_c_theta
from .errors import CircuitCertError, CircuitError, ParseError
from .lattice import simplex_split
from .poly import (
    CircuitPoly,
    Exponent,
    SparsePoly,
    format_rational,
    is_even,
    parse_json,
    parse_rational,
    validate_circuit,
)

SNAP_DENOMINATOR = 64
DEFAULT_TOL = 1e-8


@dataclass(frozen=True)
class MinimizerResult:
    v: Tuple[float, ...]
    grad_norm: float
    converged: bool
    value: float  # h(v) = p(v) / v^alpha(0)


@dataclass(frozen=True)
class SoncCertificate:
    pieces: Tuple[Tuple[Fraction, SparsePoly], ...]
    target: SparsePoly
    residual_norm: float = 0.0
    exact: bool = True

    def total(self) -> SparsePoly:
        acc: Dict[Exponent, Fraction] = {}
        for w, piece in self.pieces:
            for e, q in piece.terms:
                acc[e] = acc.get(e, Fraction(0)) + w * q
        return SparsePoly.from_dict(self.target.n, acc, allow_empty=True)

    def to_json_obj(self) -> dict:
        return {
            "exact": self.exact,
            "pieces": [{"poly": p.to_json_obj(), "weight": format_rational(w)} for w, p in self.pieces],
            "residual_norm": self.residual_norm,
            "target": self.target.to_json_obj(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True, indent=2)


@dataclass(frozen=True)
class SoncOutcome:
    status: str  # "SONC", "NotSONC" or "Unknown"
    certificate: Optional[SoncCertificate] = None
    witness: Optional[Tuple[float, ...]] = None
    orthant: Optional[Tuple[int, ...]] = None
    message: str = ""
    minimizer: Optional[MinimizerResult] = field(default=None, compare=False)

    def to_json_obj(self) -> dict:
        out = {"status": self.status, "message": self.message}
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json_obj()
        if self.witness is not None:
            out["witness"] = list(self.witness)
        if self.orthant is not None:
            out["orthant"] = list(self.orthant)
        return out


# ---------------------------------------------------------------------------
# structure of the input


@dataclass(frozen=True)
class _Layout:
    vertices: Tuple[Exponent, ...]
    inner: Tuple[Exponent, ...]  # terms that are not monomial squares
    squares: Tuple[Exponent, ...]  # inner monomial squares
    lambdas: Dict[Exponent, Tuple[Fraction, ...]]


def _is_square_term(e: Exponent, q: Fraction) -> bool:
    return q > 0 and is_even(e)


def _layout(p: SparsePoly, need_negative: bool = True) -> _Layout:
    vertices, rest = simplex_split(p)
    if not all(is_even(v) for v in vertices):
        raise CircuitError("simplex vertices must be even")
    if any(p[v] <= 0 for v in vertices):
        raise CircuitError("vertex coefficients must be positive")
    inner = tuple(e for e in rest if not _is_square_term(e, p[e]))
    squares = tuple(e for e in rest if _is_square_term(e, p[e]))
    if need_negative and any(p[e] > 0 for e in inner):
        raise CircuitError("inner coefficients must be negative (apply an orthant flip first)")
    lambdas = {}
    for y in inner:
        lam = tuple(_linalg.barycentric_coords(vertices, y))
        if any(x <= 0 for x in lam):
            raise CircuitError(f"inner exponent {y} is not strictly interior")
        lambdas[y] = lam
    return _Layout(tuple(vertices), inner, squares, lambdas)


def flip(p: SparsePoly, sigma: Sequence[int]) -> SparsePoly:
    """p(sigma * x) for a sign vector sigma."""
    out = {}
    for e, q in p.terms:
        s = 1
        for sg, k in zip(sigma, e):
            if sg < 0 and k % 2:
                s = -s
        out[e] = q * s
    return SparsePoly.from_dict(p.n, out, allow_empty=True)


def orthant_flip_search(p: SparsePoly) -> Optional[Tuple[int, ...]]:
    """Sign vector making every non-square inner term negative, or None.

    Solves sum_j y(i)_j t_j = [a_i > 0] over GF(2) and returns (-1)^t.
    """
    vertices, rest = simplex_split(p)
    constrained = [e for e in rest if not _is_square_term(e, p[e])]
    if not constrained:
        return tuple([1] * p.n)
    t = _linalg.gf2_solve([list(e) for e in constrained], [1 if p[e] > 0 else 0 for e in constrained])
    if t is None:
        return None
    return tuple(-1 if x else 1 for x in t)


# ---------------------------------------------------------------------------
# minimizer


def _h_terms(p: SparsePoly, alpha0: Exponent):
    exps = np.array([[a - b for a, b in zip(e, alpha0)] for e, _ in p.terms], dtype=float)
    coeffs = np.array([float(q) for _, q in p.terms])
    return exps, coeffs


def _newton(exps, coeffs, w0, max_iter=200):
    w = np.array(w0, dtype=float)

    def parts(w):
        t = coeffs * np.exp(exps @ w)
        return t.sum(), exps.T @ t, (exps.T * t) @ exps, np.abs(t).sum()

    val, grad, hess, scale = parts(w)
    converged = False
    for _ in range(max_iter):
        if np.linalg.norm(grad) <= 1e-13 * max(scale, 1.0):
            converged = True
            break
        try:
            np.linalg.cholesky(hess)
            step = -np.linalg.solve(hess, grad)
        except np.linalg.LinAlgError:
            step = -grad
        # trust region on the log scale
        norm = np.linalg.norm(step)
        if norm > 2.0:
            step *= 2.0 / norm
        slope = grad @ step
        if slope >= 0:
            step, slope = -grad, -(grad @ grad)
        t = 1.0
        while t > 1e-12:
            cand = w + t * step
            cval = parts(cand)[0]
            if np.isfinite(cval) and cval <= val + 1e-4 * t * slope:
                break
            t *= 0.5
        else:
            break
        w = w + t * step
        val, grad, hess, scale = parts(w)
    else:
        converged = np.linalg.norm(grad) <= 1e-10 * max(scale, 1.0)
    if not converged:
        converged = np.linalg.norm(grad) <= 1e-10 * max(scale, 1.0)
    return w, val, float(np.linalg.norm(grad)), bool(converged)


def find_positive_minimizer(p: SparsePoly, starts: int = 8, seed: int = 0) -> MinimizerResult:
    """Global minimizer over the positive orthant, computed in log coordinates.

    Multi-start damped Newton from the origin and ``starts`` random points in
    [-2, 2]^n; for a single inner term the norm minimizer is an extra start.
    """
    lay = _layout(p)
    alpha0 = lay.vertices[0]
    exps, coeffs = _h_terms(p, alpha0)
    rng = np.random.default_rng(seed)
    inits = [np.zeros(p.n)] + [rng.uniform(-2, 2, p.n) for _ in range(starts)]
    if len(lay.inner) == 1:
        from .certify import norm_minimizer

        f = validate_circuit(SparsePoly.from_dict(p.n, {e: p[e] for e in (*lay.vertices, lay.inner[0])}))
        inits.append(np.array(norm_minimizer(f).s_star))
    best = None
    for k, w0 in enumerate(inits):
        w, val, gn, ok = _newton(exps, coeffs, w0)
        key = (not ok, val, k)
        if best is None or key < best[0]:
            best = (key, w, val, gn, ok)
    _, w, val, gn, ok = best
    return MinimizerResult(tuple(float(x) for x in np.exp(w)), gn, ok, float(val))


# ---------------------------------------------------------------------------
# decomposition


def _monomial(v: Sequence[Fraction], e: Sequence[int]) -> Fraction:
    out = Fraction(1)
    for x, k in zip(v, e):
        out *= x**k
    return out


def _shares(p: SparsePoly, lay: _Layout, v: Sequence[Fraction]):
    """b_{i,k} = |a_i| lambda_k v^(y(i) - alpha(k)) for every inner term i and vertex k."""
    table = []
    for y in lay.inner:
        a = -p[y]
        table.append([a * lam * _monomial(v, [yy - aa for yy, aa in zip(y, alpha)])
                      for lam, alpha in zip(lay.lambdas[y], lay.vertices)])
    return table


def _assemble(p: SparsePoly, lay: _Layout, table, slack: Fraction, absorb_last: bool):
    n = p.n
    pieces = []
    m = len(lay.inner)
    for i, y in enumerate(lay.inner):
        coeffs = list(table[i])
        if absorb_last and i == m - 1:
            for k in range(1, len(lay.vertices)):
                coeffs[k] = p[lay.vertices[k]] - sum(table[j][k] for j in range(m - 1))
        coeffs[0] += slack
        mapping = {v: q for v, q in zip(lay.vertices, coeffs)}
        mapping[y] = p[y]
        pieces.append((Fraction(1), SparsePoly.from_dict(n, mapping)))
    used0 = sum(q for _, piece in pieces for e, q in piece.terms if e == lay.vertices[0])
    rem0 = p[lay.vertices[0]] - used0
    rest = {e: Fraction(0) for e in lay.vertices[1:]}
    for k, e in enumerate(lay.vertices[1:], start=1):
        rest[e] = p[e] - sum(q for _, piece in pieces for ee, q in piece.terms if ee == e)
    return pieces, rem0, rest


def _square_pieces(p: SparsePoly, exps: Sequence[Exponent]):
    return [(Fraction(1), SparsePoly.from_dict(p.n, {e: p[e]})) for e in exps]


def _rounded_pieces(core: SparsePoly, lay: _Layout, v_r):
    table = _shares(core, lay, v_r)
    base0 = core[lay.vertices[0]] - sum(row[0] for row in table)
    slack = base0 / (2 * len(lay.inner)) if base0 > 0 else Fraction(0)
    pieces, rem0, _ = _assemble(core, lay, table, slack, absorb_last=True)
    if rem0 > 0:
        pieces.append((Fraction(1), SparsePoly.from_dict(core.n, {lay.vertices[0]: rem0})))
    elif rem0 < 0:
        # push the deficit into the last piece; the certificate is then only approximate
        w, last = pieces[len(lay.inner) - 1]
        d = last.as_dict()
        d[lay.vertices[0]] += rem0
        pieces[len(lay.inner) - 1] = (w, SparsePoly.from_dict(core.n, d))
    return pieces


def decompose_multi_inner(p: SparsePoly, tol: float = DEFAULT_TOL) -> SoncOutcome:
    """SONC certificate for ``p`` with negative inner coefficients.

    Returns status "NotSONC" with a witness when p takes a negative value.
    """
    lay = _layout(p)
    squares = _square_pieces(p, lay.squares)
    if not lay.inner:
        pieces = [(Fraction(1), SparsePoly.from_dict(p.n, {v: p[v] for v in lay.vertices}))] + squares
        cert = SoncCertificate(tuple(pieces), p)
        return SoncOutcome("SONC", cert, message="sum of monomial squares")
    if len(lay.inner) == 1 and not lay.squares:
        verdict = certify(p)
        if not verdict.is_nonnegative:
            return SoncOutcome("NotSONC", witness=verdict.witness, message="circuit polynomial takes negative values")
        return SoncOutcome("SONC", SoncCertificate(((Fraction(1), p),), p), message="single circuit")

    # inner monomial squares only help; decompose the rest
    core = SparsePoly.from_dict(p.n, {e: q for e, q in p.terms if e not in lay.squares})
    mini = find_positive_minimizer(core)
    v_float = mini.v
    scale = float(sum(abs(q) for _, q in core.terms))
    if mini.value < -tol * scale:
        v_r = tuple(Fraction(x) for x in v_float)
        if p.evaluate(v_r) < 0:
            return SoncOutcome("NotSONC", witness=v_float, message="negative value at the minimizer", minimizer=mini)

    # exact attempt at a snapped rational minimizer
    v_snap = tuple(Fraction(x).limit_denominator(SNAP_DENOMINATOR) for x in v_float)
    if all(s > 0 and abs(float(s) - x) <= 1e-6 * max(1.0, x) for s, x in zip(v_snap, v_float)):
        table = _shares(core, lay, v_snap)
        pieces, rem0, rest = _assemble(core, lay, table, Fraction(0), absorb_last=False)
        if rem0 >= 0 and all(q == 0 for q in rest.values()):
            if rem0 > 0:
                pieces.append((Fraction(1), SparsePoly.from_dict(p.n, {lay.vertices[0]: rem0})))
            cert = SoncCertificate(tuple(pieces + squares), p)
            if verify_certificate(cert):
                return SoncOutcome("SONC", cert, message="exact at rational minimizer", minimizer=mini)

    # general case: v rounded to rationals (coarse first, to keep the data small);
    # the last piece absorbs the rounding
    for denom in (2**16, 2**32, None):
        v_r = tuple(Fraction(x) if denom is None else Fraction(x).limit_denominator(denom) for x in v_float)
        pieces = _rounded_pieces(core, lay, v_r)
        cert = SoncCertificate(tuple(pieces + squares), p, exact=True)
        if verify_certificate(cert):
            return SoncOutcome("SONC", cert, message="exact with rounded minimizer", minimizer=mini)
    cert = SoncCertificate(tuple(pieces + squares), p, residual_norm=_residual(cert), exact=False)
    if verify_certificate(cert, tol):
        return SoncOutcome("SONC", cert, message=f"approximate certificate (tolerance {tol:g})", minimizer=mini)
    return SoncOutcome("Unknown", cert, message="certificate failed verification", minimizer=mini)


def sonc_certificate(p: SparsePoly, tol: float = DEFAULT_TOL) -> SoncOutcome:
    """Full pipeline: orthant flip, decomposition, flip back."""
    try:
        simplex_split(p)
    except CircuitError as exc:
        return SoncOutcome("Unknown", message=f"synthesis not supported: {exc}")
    _layout(p, need_negative=False)
    sigma = orthant_flip_search(p)
    if sigma is None:
        return SoncOutcome("Unknown", message="no orthant makes all inner terms negative")
    q = flip(p, sigma)
    out = decompose_multi_inner(q, tol)
    cert = out.certificate
    if cert is not None:
        cert = SoncCertificate(
            tuple((w, flip(piece, sigma)) for w, piece in cert.pieces),
            p,
            cert.residual_norm,
            cert.exact,
        )
    witness = out.witness
    if witness is not None:
        witness = tuple(s * x for s, x in zip(sigma, witness))
    return SoncOutcome(out.status, cert, witness, sigma, out.message, out.minimizer)


# ---------------------------------------------------------------------------
# verification


def _residual(cert: SoncCertificate) -> float:
    diff = (cert.total() - cert.target).terms
    return max((abs(float(q)) for _, q in diff), default=0.0)


def _piece_ok(piece: SparsePoly, tol: Optional[float]) -> bool:
    if all(_is_square_term(e, q) for e, q in piece.terms):
        return True
    try:
        f = validate_circuit(piece)
    except CircuitCertError:
        try:
            return certify(piece).is_nonnegative
        except CircuitCertError:
            return False
    if not isinstance(f, CircuitPoly):
        return True
    if certify(f).is_nonnegative:
        return True
    if tol is None:
        return False
    # within tolerance of the boundary
    cmp = compare_c_theta(f)
    return cmp.relation is Relation.GREATER and float(abs(f.c)) <= cmp.theta * (1 + tol)


def verify_certificate(cert: SoncCertificate, tol: Optional[float] = None) -> bool:
    """Check every piece is nonnegative and the pieces sum to the target.

    Exact certificates are checked exactly. Otherwise ``tol`` (default 1e-8)
    bounds the relative coefficient mismatch and the boundary slack per piece.
    """
    if tol is None and not cert.exact:
        tol = DEFAULT_TOL
    if cert.exact:
        tol = None
    if any(w < 0 for w, _ in cert.pieces):
        return False
    diff = cert.total() - cert.target
    if tol is None:
        if diff.terms:
            return False
    else:
        for e, q in diff.terms:
            if abs(float(q)) > tol * (1 + abs(float(cert.target[e]))):
                return False
    return all(w == 0 or _piece_ok(piece, tol) for w, piece in cert.pieces)


def _poly_from_obj(obj, n: Optional[int] = None) -> SparsePoly:
    if isinstance(obj, str):
        from .poly import parse_text

        return parse_text(obj, n)
    if isinstance(obj, dict) and not obj.get("terms"):
        return SparsePoly.from_dict(obj.get("n", n or 1), {}, allow_empty=True)
    return parse_json(obj)


def certificate_from_json(doc) -> SoncCertificate:
    """Load a certificate; polynomials may be JSON objects or text strings."""
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", exc.pos) from None
    if not isinstance(doc, dict) or "target" not in doc or "pieces" not in doc:
        raise ParseError('certificate needs keys "target" and "pieces"')
    target = _poly_from_obj(doc["target"])
    pieces = []
    for k, item in enumerate(doc["pieces"]):
        if isinstance(item, dict) and "poly" in item:
            w = parse_rational(item.get("weight", "1"))
            poly = _poly_from_obj(item["poly"], target.n)
        else:
            w, poly = Fraction(1), _poly_from_obj(item, target.n)
        if poly.n != target.n:
            raise ParseError(f"piece {k} has dimension {poly.n}, target has {target.n}")
        pieces.append((w, poly))
    return SoncCertificate(
        tuple(pieces),
        target,
        float(doc.get("residual_norm", 0.0)),
        bool(doc.get("exact", True)),
    )


__all__ = [
    "MinimizerResult",
    "SoncCertificate",
    "SoncOutcome",
    "certificate_from_json",
    "decompose_multi_inner",
    "find_positive_minimizer",
    "flip",
    "orthant_flip_search",
    "sonc_certificate",
    "verify_certificate",
]
