"""Amoebas of real circuit polynomials: thresholds, point classification, solidness, rasters.

Everything is measured after dividing by the inner monomial, so at a log
point w the vertex terms are ``b_j e^<w, alpha(j) - y>`` and the inner term
is the constant |c|. Theta_w is their sum and Psi_w their maximum.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Tuple

import numpy as np
from mpmath.ctx_mp import MPContext

from . import _linalg
from .certify import Relation, _compare, compare_c_theta
from .errors import DimensionError, ShapeError
from .poly import CircuitPoly, Exponent

EPS = 1e-9
MAX_RESOLUTION = 4096


class Verdict(str, Enum):
    IN_AMOEBA = "InAmoeba"
    BOUNDED = "InBoundedComplement"
    UNBOUNDED = "InUnboundedComplement"
    UNDETERMINED = "Undetermined"


class Solidity(str, Enum):
    SOLID = "Solid"
    NOT_SOLID = "NotSolid"
    UNKNOWN = "Unknown"


PIXEL = {Verdict.IN_AMOEBA: 0, Verdict.UNDETERMINED: 128, Verdict.BOUNDED: 224, Verdict.UNBOUNDED: 255}
_CODES = list(Verdict)


@dataclass(frozen=True)
class PointClass:
    verdict: Verdict
    theta_w: float
    psi_w: float
    order: Optional[Exponent] = None

    def to_json_obj(self) -> dict:
        return {
            "order": None if self.order is None else list(self.order),
            "psi_w": self.psi_w,
            "theta_w": self.theta_w,
            "verdict": self.verdict.value,
        }


@dataclass(frozen=True)
class AmoebaReport:
    solid: Solidity
    theta_f: float
    psi_f: float
    sign_effective: bool

    def to_json_obj(self) -> dict:
        return {
            "psi_f": self.psi_f,
            "sign_effective": self.sign_effective,
            "solid": self.solid.value,
            "theta_f": self.theta_f,
        }


def _offsets(f: CircuitPoly):
    return [tuple(a - b for a, b in zip(v, f.inner)) for v in f.vertices]


def sign_effective(f: CircuitPoly) -> bool:
    """Whether some real orthant gives every vertex term the sign opposite to c.

    Over GF(2): find t with <alpha(j) - y, t> = [c > 0] for all j. With even
    vertices this is "c < 0 or y has an odd coordinate".
    """
    rhs = 1 if f.c > 0 else 0
    rows = [[x % 2 for x in d] for d in _offsets(f)]
    return _linalg.gf2_solve(rows, [rhs] * len(rows)) is not None


def thresholds_at(f: CircuitPoly, w: Sequence[float], prec: int = 113) -> Tuple[float, float]:
    """(Theta_w, Psi_w) at the log point w."""
    if len(w) != f.n:
        raise DimensionError(f"point has {len(w)} coordinates, polynomial has {f.n} variables")
    mp = MPContext()
    mp.prec = prec
    terms = [
        mp.mpf(b.numerator) / b.denominator * mp.exp(mp.fsum(mp.mpf(x) * d for x, d in zip(w, off)))
        for b, off in zip(f.b, _offsets(f))
    ]
    return float(mp.fsum(terms)), float(max(terms))


def psi_minimizer(f: CircuitPoly):
    """Solve log b_j + <alpha(j) - y, w> = t for (w, t); returns (w, e^t)."""
    mp = MPContext()
    mp.prec = 113
    rows = [[mp.mpf(d) for d in off] + [mp.mpf(-1)] for off in _offsets(f)]
    rhs = [-mp.log(mp.mpf(b.numerator) / b.denominator) for b in f.b]
    sol = mp.lu_solve(mp.matrix(rows), mp.matrix(rhs))
    n = f.n
    return tuple(float(sol[i]) for i in range(n)), float(mp.exp(sol[n]))


def psi_f(f: CircuitPoly) -> float:
    """min_w Psi_w, the equal-value point of the vertex terms."""
    return psi_minimizer(f)[1]


def theta_f(f: CircuitPoly) -> float:
    """min_w Theta_w, which equals the circuit number."""
    return compare_c_theta(f).theta


def _lopsided(terms: Sequence[float], m: float, vertices) -> Tuple[Verdict, Optional[Exponent]]:
    total = sum(terms) + m
    if m > total - m:
        return Verdict.BOUNDED, None
    for t, v in zip(terms, vertices):
        if t > total - t:
            return Verdict.UNBOUNDED, tuple(v)
    return Verdict.UNDETERMINED, None


def classify_point(f: CircuitPoly, w: Sequence[float], eps: float = EPS) -> PointClass:
    """Locate the log point w relative to the amoeba of f."""
    theta, psi = thresholds_at(f, w)
    m = abs(float(f.c))
    if m > theta * (1 + eps):
        return PointClass(Verdict.BOUNDED, theta, psi)
    if psi * (1 - eps) <= m <= theta * (1 + eps) and sign_effective(f):
        return PointClass(Verdict.IN_AMOEBA, theta, psi)
    offs = _offsets(f)
    terms = [float(b) * float(np.exp(np.dot(w, off))) for b, off in zip(f.b, offs)]
    verdict, order = _lopsided(terms, m, f.vertices)
    return PointClass(verdict, theta, psi, order)


def is_solid(f: CircuitPoly) -> AmoebaReport:
    """Solidness of the amoeba; exact comparisons against Theta_f and Psi_f."""
    cmp = compare_c_theta(f)
    th = cmp.theta
    ps = psi_f(f)
    effective = sign_effective(f)
    if effective:
        solid = Solidity.SOLID if cmp.relation is not Relation.GREATER else Solidity.NOT_SOLID
    elif cmp.relation is Relation.GREATER:
        solid = Solidity.NOT_SOLID
    else:
        # Psi_f = prod b_j^lambda_j: compare exactly by feeding b_j * lambda_j
        psi_cmp = _compare([b * x for b, x in zip(f.b, f.lambdas)], f.lambdas, f.c, 128)
        solid = Solidity.SOLID if psi_cmp.relation is not Relation.GREATER else Solidity.UNKNOWN
    return AmoebaReport(solid, th, ps, effective)


# ---------------------------------------------------------------------------
# rasters


@dataclass(frozen=True)
class Raster:
    """Verdict grid; row 0 is the top row (largest w2)."""

    w1: np.ndarray  # column coordinates
    w2: np.ndarray  # row coordinates, descending
    codes: np.ndarray  # index into list(Verdict)
    theta: np.ndarray
    psi: np.ndarray

    def verdict_at(self, row: int, col: int) -> Verdict:
        return _CODES[int(self.codes[row, col])]

    def count(self, verdict: Verdict) -> int:
        return int(np.count_nonzero(self.codes == _CODES.index(verdict)))

    def mask(self, verdict: Verdict) -> np.ndarray:
        return self.codes == _CODES.index(verdict)

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="ascii") as fh:
            fh.write("w1,w2,verdict,theta_w,psi_w\n")
            for r, y in enumerate(self.w2):
                for c, x in enumerate(self.w1):
                    fh.write(
                        f"{float(x)!r},{float(y)!r},{_CODES[self.codes[r, c]].value},"
                        f"{float(self.theta[r, c])!r},{float(self.psi[r, c])!r}\n"
                    )

    def write_pgm(self, path) -> None:
        lut = np.array([PIXEL[v] for v in _CODES], dtype=np.uint8)
        img = lut[self.codes]
        h, w = img.shape
        with open(path, "wb") as fh:
            fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
            fh.write(img.tobytes())


def raster(
    f: CircuitPoly,
    box: Tuple[Sequence[float], Sequence[float]],
    resolution: int,
    eps: float = EPS,
    sampling: str = "center",
) -> Raster:
    """Classify a resolution x resolution grid over box = ((lo1, lo2), (hi1, hi2)).

    ``sampling="center"`` uses cell centers, ``"node"`` uses evenly spaced
    nodes including the box corners.
    """
    if f.n != 2:
        raise DimensionError("rasters are only defined for two variables")
    if not 1 <= resolution <= MAX_RESOLUTION:
        raise ShapeError(f"resolution must be in [1, {MAX_RESOLUTION}]")
    (lo1, lo2), (hi1, hi2) = box
    if sampling == "center":
        w1 = lo1 + (np.arange(resolution) + 0.5) * (hi1 - lo1) / resolution
        w2 = lo2 + (np.arange(resolution) + 0.5) * (hi2 - lo2) / resolution
    elif sampling == "node":
        w1 = np.linspace(lo1, hi1, resolution)
        w2 = np.linspace(lo2, hi2, resolution)
    else:
        raise ValueError(f"unknown sampling {sampling!r}")
    w2 = w2[::-1]
    W1, W2 = np.meshgrid(w1, w2)
    offs = _offsets(f)
    terms = np.stack([float(b) * np.exp(W1 * d[0] + W2 * d[1]) for b, d in zip(f.b, offs)])
    theta = terms.sum(axis=0)
    psi = terms.max(axis=0)
    m = abs(float(f.c))
    codes = np.full(theta.shape, _CODES.index(Verdict.UNDETERMINED), dtype=np.int64)
    bounded = m > theta * (1 + eps)
    inside = ~bounded & (psi * (1 - eps) <= m) & (m <= theta * (1 + eps)) if sign_effective(f) else np.zeros_like(bounded)
    rest = ~bounded & ~inside
    total = theta + m
    lop_unbounded = np.any(terms > total - terms, axis=0) & rest
    lop_bounded = (m > total - m) & rest
    codes[lop_unbounded] = _CODES.index(Verdict.UNBOUNDED)
    codes[lop_bounded | bounded] = _CODES.index(Verdict.BOUNDED)
    codes[inside] = _CODES.index(Verdict.IN_AMOEBA)
    return Raster(w1, w2, codes, theta, psi)


def connected_components(mask: np.ndarray) -> int:
    """Number of 4-connected components of a boolean grid (iterative flood fill)."""
    seen = np.zeros_like(mask, dtype=bool)
    rows, cols = mask.shape
    count = 0
    for r0 in range(rows):
        for c0 in range(cols):
            if not mask[r0, c0] or seen[r0, c0]:
                continue
            count += 1
            stack = [(r0, c0)]
            seen[r0, c0] = True
            while stack:
                r, c = stack.pop()
                for rr, cc in ((r + 1, c), (r - 1, c), (r, c + 1), (r, c - 1)):
                    if 0 <= rr < rows and 0 <= cc < cols and mask[rr, cc] and not seen[rr, cc]:
                        seen[rr, cc] = True
                        stack.append((rr, cc))
    return count


__all__ = [
    "AmoebaReport",
    "PointClass",
    "Raster",
    "Solidity",
    "Verdict",
    "classify_point",
    "connected_components",
    "is_solid",
    "psi_f",
    "psi_minimizer",
    "raster",
    "sign_effective",
    "theta_f",
    "thresholds_at",
]
