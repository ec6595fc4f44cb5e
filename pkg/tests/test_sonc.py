import json
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import HealthCheck, assume, given, settings, strategies as st

from circuitcert.certify import Relation, compare_c_theta
from circuitcert.errors import CircuitError
from circuitcert.lattice import simplex_split
from circuitcert.poly import SparsePoly, circuit_from_parts, parse_text, validate_circuit
from circuitcert.sonc import (
    SoncCertificate,
    certificate_from_json,
    decompose_multi_inner,
    find_positive_minimizer,
    flip,
    orthant_flip_search,
    sonc_certificate,
    verify_certificate,
)

from helpers import even_simplices, interior_points, small_rationals

EX_MULTI = parse_text("1 + 1/2*x1^6 + 1/32*x2^4 - 1/2*x1*x2 - 1/2*x1^2*x2")
THREE_PIECE_TARGET = "3 + 4*x2^4 + 6*x1^8 + x1^4*x2^4 - 3*x1*x2 + 5*x1^3*x2 + 2*x1^4*x2^2"
THREE_PIECE_PIECES = ["1 + 2*x1^8 + 2*x2^4 - 3*x1*x2", "1 + 3*x1^8 + 2*x2^4 + 5*x1^3*x2", "1 + x1^8 + x1^4*x2^4 + 2*x1^4*x2^2"]


def test_minimizer_of_multi_inner_example():
    res = find_positive_minimizer(EX_MULTI)
    assert res.converged
    assert res.v == pytest.approx((1.0, 2.0), abs=1e-9)
    assert res.value == pytest.approx(0.0, abs=1e-12)


def test_multi_inner_pieces_are_exact():
    out = decompose_multi_inner(EX_MULTI)
    assert out.status == "SONC" and out.certificate.exact
    got = sorted(p.as_dict().items() for _, p in out.certificate.pieces)
    want = sorted(
        parse_text(t, n=2).as_dict().items()
        for t in ["7/12 + 1/6*x1^6 + 1/64*x2^4 - 1/2*x1*x2", "5/12 + 1/3*x1^6 + 1/64*x2^4 - 1/2*x1^2*x2"]
    )
    assert got == want
    assert verify_certificate(out.certificate)


def test_pieces_touch_the_boundary():
    out = decompose_multi_inner(EX_MULTI)
    for _, piece in out.certificate.pieces:
        assert compare_c_theta(validate_circuit(piece, require_even=False)).relation is Relation.EQUAL


def _three_piece(pieces=THREE_PIECE_PIECES):
    return SoncCertificate(tuple((Fraction(1), parse_text(t, n=2)) for t in pieces), parse_text(THREE_PIECE_TARGET))


def test_three_piece_certificate():
    assert verify_certificate(_three_piece())


def test_three_piece_certificate_perturbed():
    pieces = list(THREE_PIECE_PIECES)
    pieces[2] = "1 + x1^8 + x1^4*x2^4 + 3*x1^4*x2^2"
    assert not verify_certificate(_three_piece(pieces))


def test_piece_that_is_not_nonnegative_fails():
    pieces = ["1 + 2*x1^8 + 2*x2^4 - 6*x1*x2"] + THREE_PIECE_PIECES[1:]
    cert = _three_piece(pieces)
    cert = SoncCertificate(cert.pieces, cert.total())
    assert not verify_certificate(cert)


def test_empty_certificate():
    zero = SparsePoly.from_dict(2, {}, allow_empty=True)
    assert verify_certificate(SoncCertificate((), zero))


def test_certificate_json_roundtrip():
    cert = decompose_multi_inner(EX_MULTI).certificate
    again = certificate_from_json(cert.to_json())
    assert again.total() == cert.total()
    assert verify_certificate(again)
    assert json.loads(cert.to_json()) == json.loads(again.to_json())


def test_non_simplex_support_is_unknown():
    assert sonc_certificate(parse_text(THREE_PIECE_TARGET)).status == "Unknown"


def test_orthant_flip_examples():
    assert orthant_flip_search(parse_text("1 + x1^4 + x2^4 - 3*x1^2*x2^2")) == (1, 1)
    assert orthant_flip_search(parse_text("1 + x1^8 + x2^4 - 3*x1*x2 + 5*x1^3*x2")) is None
    sigma = orthant_flip_search(parse_text("1 + x1^8 + x2^4 + 3*x1*x2"))
    assert sigma in {(-1, 1), (1, -1)}


def test_flipped_instance_gets_certified():
    p = flip(EX_MULTI, (-1, 1))
    out = sonc_certificate(p)
    assert out.status == "SONC"
    assert out.orthant == (-1, 1)
    assert out.certificate.total() == p
    assert verify_certificate(out.certificate)


def test_negative_instance_is_not_sonc():
    out = sonc_certificate(parse_text("1 + 1/2*x1^6 + 1/32*x2^4 - x1*x2 - x1^2*x2"))
    assert out.status == "NotSONC"
    assert out.witness is not None


def test_layout_rejects_boundary_inner_terms():
    with pytest.raises(CircuitError):
        decompose_multi_inner(parse_text("1 + x1^4 + x2^4 - x1^2 - x1*x2"))


# ---------------------------------------------------------------------------
# properties


@st.composite
def flip_instances(draw):
    vertices = draw(even_simplices(max_n=3, max_coord=8).filter(lambda v: len(interior_points(v)) >= 1))
    inner = draw(st.lists(st.sampled_from(interior_points(vertices)), min_size=1, max_size=4, unique=True))
    coeffs = draw(st.lists(small_rationals(), min_size=len(inner), max_size=len(inner)))
    terms = {v: Fraction(1) for v in vertices}
    terms.update(zip(inner, coeffs))
    return SparsePoly.from_dict(len(vertices[0]), terms)


@settings(max_examples=100, deadline=None, suppress_health_check=[HealthCheck.filter_too_much, HealthCheck.too_slow])
@given(flip_instances())
def test_orthant_flip_soundness(p):
    sigma = orthant_flip_search(p)
    vertices, rest = simplex_split(p)
    constrained = [e for e in rest if not (p[e] > 0 and all(x % 2 == 0 for x in e))]

    def sign_at(s, e):
        out = 1 if p[e] > 0 else -1
        for si, k in zip(s, e):
            out *= si**k
        return out

    if sigma is None:
        # completeness: no sign vector works
        assert all(any(sign_at(s, e) > 0 for e in constrained) for s in product((1, -1), repeat=p.n))
        return
    assert all(sign_at(sigma, e) < 0 for e in constrained)
    q = flip(p, sigma)
    assert all(q[e] < 0 for e in constrained)
    assert all(p[e] * SparsePoly.from_dict(p.n, {e: 1}).evaluate(sigma) < 0 for e in constrained)


@st.composite
def summed_circuits(draw):
    """A nonnegative polynomial built as a sum of nonnegative circuits on a common simplex."""
    vertices = draw(even_simplices(max_n=2, max_coord=8).filter(lambda v: len(interior_points(v)) >= 2))
    inner = draw(st.lists(st.sampled_from(interior_points(vertices)), min_size=2, max_size=3, unique=True))
    total = {}
    for y in inner:
        k = len(vertices)
        b = draw(st.lists(small_rationals(max_num=10, max_den=5, positive=True), min_size=k, max_size=k))
        f = circuit_from_parts(vertices, y, b, Fraction(-1))
        theta = compare_c_theta(f).theta
        shrink = draw(st.sampled_from([Fraction(1, 2), Fraction(3, 4), Fraction(9, 10)]))
        c = -Fraction(theta * float(shrink)).limit_denominator(100)
        assume(c < 0)
        piece = f.with_coefficients(c=c).base
        for e, q in piece.terms:
            total[e] = total.get(e, Fraction(0)) + q
    return SparsePoly.from_dict(len(vertices[0]), total)


@settings(max_examples=30, deadline=None, suppress_health_check=[HealthCheck.filter_too_much, HealthCheck.too_slow])
@given(summed_circuits())
def test_pipeline_soundness(p):
    out = sonc_certificate(p)
    assert out.status == "SONC", out.message
    cert = out.certificate
    assert verify_certificate(cert)
    if cert.exact:
        assert cert.total() == p
    else:
        for e, q in p.terms:
            assert abs(float(cert.total()[e] - q)) <= 1e-8 * max(1.0, abs(float(q)))
