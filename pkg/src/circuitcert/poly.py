"""Sparse polynomials with exact rational coefficients.

Text grammar (whitespace ignored)::

    poly   := [sign] term (sign term)*
    sign   := '+' | '-'
    term   := factor ('*' factor)*
    factor := INT ['/' INT] | VAR ['^' INT]
    VAR    := 'x' INT            (x1 .. xn, 1-based)

JSON form::

    {"n": 2, "terms": [{"coeff": "-3", "exp": [2, 2]}, ...]}

``coeff`` is a string ``"p"`` or ``"p/q"`` (JSON integers are accepted too;
JSON floats are rejected). Terms are always emitted in graded order:
ascending total degree, and inside one degree descending lexicographic with
x1 most significant (so ``x1^4*x2^2`` precedes ``x1^2*x2^4``).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Dict, Iterable, Mapping, Optional, Tuple, Union

from . import _linalg
from .errors import (
    BoundaryInnerPoint,
    CircuitError,
    DimensionError,
    ParseError,
)

Exponent = Tuple[int, ...]

INT64_MAX = 2**63 - 1


def term_key(exp: Exponent):
    return (sum(exp), tuple(-e for e in exp))


def is_even(exp: Iterable[int]) -> bool:
    return all(e % 2 == 0 for e in exp)


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_rational(s) -> Fraction:
    if isinstance(s, bool) or isinstance(s, float):
        raise ParseError(f"floating-point coefficient {s!r} is not accepted; use p/q")
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str) or not re.fullmatch(r"\s*[+-]?\d+(\s*/\s*\d+)?\s*", s):
        raise ParseError(f"malformed rational {s!r}")
    num, _, den = s.partition("/")
    den = int(den) if den else 1
    if den == 0:
        raise ParseError("zero denominator")
    return Fraction(int(num), den)


@dataclass(frozen=True)
class SparsePoly:
    """Immutable exponent -> coefficient map in ``n`` variables.

    Zero coefficients are never stored. Exponents may be negative for Laurent
    polynomials produced internally (e.g. zero standard forms); the parsers
    only accept nonnegative exponents.
    """

    n: int
    terms: Tuple[Tuple[Exponent, Fraction], ...]
    _index: Dict[Exponent, Fraction] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", dict(self.terms))

    @classmethod
    def from_dict(cls, n: int, mapping: Mapping, allow_empty: bool = False) -> "SparsePoly":
        if n < 1:
            raise DimensionError("dimension must be positive")
        merged: Dict[Exponent, Fraction] = {}
        for exp, coeff in mapping.items() if isinstance(mapping, Mapping) else mapping:
            exp = tuple(int(e) for e in exp)
            if len(exp) != n:
                raise DimensionError(f"exponent {exp} has length {len(exp)}, expected {n}")
            if any(abs(e) > INT64_MAX for e in exp):
                raise DimensionError(f"exponent {exp} exceeds the 64-bit range")
            merged[exp] = merged.get(exp, Fraction(0)) + Fraction(coeff)
        terms = tuple(sorted(((e, c) for e, c in merged.items() if c != 0), key=lambda t: term_key(t[0])))
        if not terms and not allow_empty:
            raise ParseError("empty polynomial after canonicalization")
        return cls(n, terms)

    # mapping-like access
    def __getitem__(self, exp) -> Fraction:
        return self._index.get(tuple(exp), Fraction(0))

    def __contains__(self, exp) -> bool:
        return tuple(exp) in self._index

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    @property
    def support(self) -> Tuple[Exponent, ...]:
        return tuple(e for e, _ in self.terms)

    def as_dict(self) -> Dict[Exponent, Fraction]:
        return dict(self._index)

    def __add__(self, other: "SparsePoly") -> "SparsePoly":
        if self.n != other.n:
            raise DimensionError("adding polynomials of different dimension")
        merged = self.as_dict()
        for e, c in other.terms:
            merged[e] = merged.get(e, Fraction(0)) + c
        return SparsePoly.from_dict(self.n, merged, allow_empty=True)

    def __sub__(self, other: "SparsePoly") -> "SparsePoly":
        return self + other.scale(-1)

    def scale(self, t) -> "SparsePoly":
        t = Fraction(t)
        return SparsePoly.from_dict(self.n, {e: c * t for e, c in self.terms}, allow_empty=True)

    def evaluate(self, point):
        """Evaluate at ``point``; the arithmetic type follows the inputs."""
        total = 0
        for exp, coeff in self.terms:
            value = coeff if isinstance(point[0], Fraction) else _coerce(coeff, point[0])
            for x, e in zip(point, exp):
                if e:
                    value = value * x**e
            total = total + value
        return total

    def to_text(self) -> str:
        return format_poly(self)

    def to_json_obj(self) -> dict:
        return {
            "n": self.n,
            "terms": [{"coeff": format_rational(c), "exp": list(e)} for e, c in self.terms],
        }

    def __str__(self) -> str:
        return self.to_text()


def _coerce(coeff: Fraction, like):
    if isinstance(like, int):
        return coeff
    try:
        import mpmath

        if isinstance(like, (mpmath.mpf, mpmath.mpc)):
            return mpmath.mpf(coeff.numerator) / coeff.denominator
        if isinstance(like, mpmath.iv.mpf):
            return mpmath.iv.mpf(coeff.numerator) / coeff.denominator
    except ImportError:  # pragma: no cover
        pass
    return float(coeff) if not isinstance(like, complex) else complex(float(coeff))


def format_monomial(exp: Exponent) -> str:
    parts = []
    for i, e in enumerate(exp, start=1):
        if e == 1:
            parts.append(f"x{i}")
        elif e != 0:
            parts.append(f"x{i}^{e}")
    return "*".join(parts)


def format_poly(p: SparsePoly) -> str:
    out = []
    for k, (exp, coeff) in enumerate(p.terms):
        mono = format_monomial(exp)
        mag = abs(coeff)
        if not mono:
            body = format_rational(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{format_rational(mag)}*{mono}"
        if k == 0:
            out.append(("-" if coeff < 0 else "") + body)
        else:
            out.append(("- " if coeff < 0 else "+ ") + body)
    return " ".join(out) if out else "0"


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<var>x\d+)|(?P<op>[-+*/^])|(?P<bad>\S))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace left
            break
        if m.group("bad") is not None:
            ch = m.group("bad")
            where = m.start("bad")
            if ch == ".":
                raise ParseError("floating-point coefficients are not accepted; use p/q", where)
            raise ParseError(f"unexpected character {ch!r}", where)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_int(self) -> int:
        kind, value, pos = self.take()
        if kind != "num":
            raise ParseError("expected an integer", pos)
        return int(value)

    def parse(self):
        terms = []
        sign = 1
        kind, value, _ = self.peek()
        if kind == "op" and value in "+-":
            self.take()
            sign = -1 if value == "-" else 1
        terms.append(self.term(sign))
        while True:
            kind, value, pos = self.peek()
            if kind == "end":
                return terms
            if kind == "op" and value in "+-":
                self.take()
                terms.append(self.term(-1 if value == "-" else 1))
            else:
                raise ParseError(f"expected '+' or '-', found {value!r}", pos)

    def term(self, sign: int):
        coeff = Fraction(sign)
        powers: Dict[int, int] = {}
        coeff *= self.factor(powers)
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            coeff *= self.factor(powers)
        return coeff, powers

    def factor(self, powers) -> Fraction:
        kind, value, pos = self.take()
        if kind == "num":
            num = int(value)
            if self.peek()[0] == "op" and self.peek()[1] == "/":
                self.take()
                den = self.expect_int()
                if den == 0:
                    raise ParseError("zero denominator", pos)
                return Fraction(num, den)
            return Fraction(num)
        if kind == "var":
            idx = int(value[1:])
            if idx < 1:
                raise ParseError("variables are numbered from x1", pos)
            exp = 1
            if self.peek()[0] == "op" and self.peek()[1] == "^":
                self.take()
                k, v, p = self.peek()
                if k == "op" and v == "-":
                    raise ParseError("negative exponent", p)
                exp = self.expect_int()
            powers[idx] = powers.get(idx, 0) + exp
            return Fraction(1)
        raise ParseError(f"expected a number or a variable, found {value!r}", pos)


def parse_text(text: str, n: Optional[int] = None) -> SparsePoly:
    raw = _Parser(text).parse()
    max_idx = max((max(p) for _, p in raw if p), default=1)
    if n is None:
        n = max_idx
    elif max_idx > n:
        raise DimensionError(f"variable x{max_idx} exceeds declared dimension {n}")
    mapping: Dict[Exponent, Fraction] = {}
    for coeff, powers in raw:
        exp = tuple(powers.get(i, 0) for i in range(1, n + 1))
        mapping[exp] = mapping.get(exp, Fraction(0)) + coeff
    return SparsePoly.from_dict(n, mapping)


def parse_json(doc: Union[str, dict]) -> SparsePoly:
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", exc.pos) from None
    if not isinstance(doc, dict) or "n" not in doc or "terms" not in doc:
        raise ParseError('JSON polynomial needs keys "n" and "terms"')
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise DimensionError('"n" must be a positive integer')
    items = []
    for k, t in enumerate(doc["terms"]):
        if not isinstance(t, dict) or "coeff" not in t or "exp" not in t:
            raise ParseError(f'term {k} needs "coeff" and "exp"')
        exp = t["exp"]
        if not isinstance(exp, list) or not all(isinstance(e, int) and not isinstance(e, bool) for e in exp):
            raise ParseError(f"term {k}: exponent must be a list of integers")
        if len(exp) != n:
            raise DimensionError(f"term {k}: exponent length {len(exp)} != n = {n}")
        if any(e < 0 for e in exp):
            raise ParseError(f"term {k}: negative exponent")
        items.append((tuple(exp), parse_rational(t["coeff"])))
    merged: Dict[Exponent, Fraction] = {}
    for e, c in items:
        merged[e] = merged.get(e, Fraction(0)) + c
    return SparsePoly.from_dict(n, merged)


def parse_poly(source: Union[str, dict], n: Optional[int] = None) -> SparsePoly:
    """Parse either the text grammar or the JSON document form."""
    if isinstance(source, dict):
        return parse_json(source)
    if source.lstrip().startswith("{"):
        return parse_json(source)
    return parse_text(source, n)


def to_json(p: SparsePoly) -> str:
    return json.dumps(p.to_json_obj())


# ---------------------------------------------------------------------------
# circuit polynomials


@dataclass(frozen=True)
class MonomialSquares:
    """Outcome of :func:`validate_circuit` when there is no inner term.

    ``base`` is a positive combination of even monomials on a simplex, hence
    a sum of monomial squares.
    """

    base: SparsePoly
    vertices: Tuple[Exponent, ...]

    @property
    def n(self) -> int:
        return self.base.n


@dataclass(frozen=True)
class CircuitPoly:
    base: SparsePoly
    vertices: Tuple[Exponent, ...]
    inner: Exponent
    lambdas: Tuple[Fraction, ...]
    mu: int
    c: Fraction
    b: Tuple[Fraction, ...]

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def inner_even(self) -> bool:
        return is_even(self.inner)

    def with_coefficients(self, b=None, c=None) -> "CircuitPoly":
        """Same support, new coefficients (re-validated)."""
        b = self.b if b is None else tuple(Fraction(x) for x in b)
        c = self.c if c is None else Fraction(c)
        return circuit_from_parts(self.vertices, self.inner, b, c, require_even=is_even_support(self.vertices))


def is_even_support(vertices) -> bool:
    return all(is_even(v) for v in vertices)


def _affinely_independent(points) -> bool:
    if len(points) <= 1:
        return True
    p0 = points[0]
    diffs = [[a - b for a, b in zip(p, p0)] for p in points[1:]]
    return _linalg.rank(diffs) == len(diffs)


def circuit_from_parts(vertices, inner, b, c, require_even: bool = True) -> CircuitPoly:
    n = len(inner)
    mapping = {tuple(v): Fraction(x) for v, x in zip(vertices, b)}
    mapping[tuple(inner)] = Fraction(c)
    return validate_circuit(SparsePoly.from_dict(n, mapping), require_even=require_even)


def validate_circuit(p: SparsePoly, require_even: bool = True):
    """Identify the simplex/inner split of ``p`` and check circuit invariants.

    Returns a :class:`CircuitPoly`, or :class:`MonomialSquares` when ``p`` has
    exactly ``n+1`` terms forming an even simplex with positive coefficients.
    Raises :class:`BoundaryInnerPoint` if the only candidate inner term sits on
    the boundary of the simplex spanned by the others.
    """
    n = p.n
    support = p.support
    if len(support) == n + 1:
        if not _affinely_independent(support):
            raise CircuitError("support is not a simplex")
        if require_even and not all(is_even(e) for e in support):
            raise CircuitError("simplex vertices must have even exponents")
        if any(c <= 0 for _, c in p.terms):
            raise CircuitError("n+1 terms without an inner term must all have positive coefficients")
        return MonomialSquares(p, support)
    if len(support) != n + 2:
        raise CircuitError(f"expected n+1 or n+2 = {n + 2} terms, got {len(support)}")

    boundary = None
    for k, cand in enumerate(support):
        others = support[:k] + support[k + 1:]
        if not _affinely_independent(others):
            continue
        lam = _linalg.barycentric_coords(others, cand)
        if all(x > 0 for x in lam):
            return _build(p, others, cand, lam, require_even)
        if all(x >= 0 for x in lam) and boundary is None:
            boundary = (cand, lam)
    if boundary is not None:
        raise BoundaryInnerPoint(
            f"inner exponent {boundary[0]} lies on the boundary of the simplex",
            inner=boundary[0],
            lambdas=tuple(boundary[1]),
        )
    raise CircuitError("no term lies strictly inside the convex hull of the others")


def _build(p, vertices, inner, lam, require_even) -> CircuitPoly:
    for k in range(len(vertices) + 1):
        pts = list(vertices) + [inner]
        del pts[k]
        if not _affinely_independent(pts):
            raise CircuitError("a proper subset of the support is affinely dependent")
    if require_even and not all(is_even(v) for v in vertices):
        raise CircuitError("simplex vertices must have even exponents")
    b = tuple(p[v] for v in vertices)
    if any(x <= 0 for x in b):
        raise CircuitError("vertex coefficients must be positive")
    mu = 1
    for x in lam:
        mu = lcm(mu, x.denominator)
    return CircuitPoly(
        base=p,
        vertices=tuple(vertices),
        inner=tuple(inner),
        lambdas=tuple(lam),
        mu=mu,
        c=p[inner],
        b=b,
    )


__all__ = [
    "SparsePoly",
    "CircuitPoly",
    "MonomialSquares",
    "parse_poly",
    "parse_text",
    "parse_json",
    "to_json",
    "format_poly",
    "format_rational",
    "parse_rational",
    "validate_circuit",
    "circuit_from_parts",
    "is_even",
    "term_key",
]
