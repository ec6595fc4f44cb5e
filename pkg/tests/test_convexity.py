from fractions import Fraction

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from circuitcert.convexity import (
    Convexity,
    Reason,
    binary_form_bound,
    is_convex,
)
from circuitcert.errors import ShapeError
from circuitcert.poly import SparsePoly, parse_text

from helpers import circuits, small_rationals
from oracles import check_oracle, not_psd_exact

def test_univariate_y1_convex():
    for text in ("1 - 7*x1 + x1^6", "1 + 5/3*x1 + x1^6"):
        assert is_convex(parse_text(text)).status is Convexity.CONVEX


def test_univariate_rules():
    assert is_convex(parse_text("1 + 3*x1^2 + x1^4")).status is Convexity.CONVEX
    v = is_convex(parse_text("1 - 3*x1^2 + x1^4"))
    assert v.status is Convexity.NOT_CONVEX and v.reason is Reason.UNIVARIATE
    assert is_convex(parse_text("1 + x1^3 + x1^4")).status is Convexity.NOT_CONVEX


def test_binary_form_bound_example():
    assert binary_form_bound(2, 3) == Fraction(3, 8)
    v = is_convex(parse_text("x2^6 + 1/8*x1^2*x2^4 + x1^6"))
    assert v.status is Convexity.CONVEX and v.reason is Reason.BINARY_FORM


def test_binary_form_gap_is_unknown():
    assert is_convex(parse_text("x2^6 + 1/2*x1^2*x2^4 + x1^6")).status is Convexity.UNKNOWN


def test_binary_form_negative_or_odd():
    assert is_convex(parse_text("x2^6 - 1/8*x1^2*x2^4 + x1^6")).status is Convexity.NOT_CONVEX
    v = is_convex(parse_text("x2^6 + 1/8*x1*x2^5 + x1^6"))
    assert v.status is Convexity.NOT_CONVEX


def test_binary_form_small_b_is_caught():
    # inside the coefficient bound, but the Hessian determinant dips below zero near x = 2
    v = check_oracle(parse_text("x2^8 + 9/16*x1^4*x2^4 + 1/1000*x1^8"))
    assert v.status is Convexity.NOT_CONVEX
    assert v.witness is not None


def test_quadratic_binary_form():
    # y = 1 with d = 1: convex exactly when the quadratic form is PSD
    assert is_convex(parse_text("x2^2 + x1*x2 + x1^2")).status is Convexity.CONVEX
    assert is_convex(parse_text("x2^2 - 2*x1*x2 + x1^2")).status is Convexity.CONVEX
    v = check_oracle(parse_text("x2^2 + 3*x1*x2 + x1^2"))
    assert v.status is Convexity.NOT_CONVEX


def test_motzkin_not_convex():
    f = parse_text("1 + x1^4*x2^2 + x1^2*x2^4 - 3*x1^2*x2^2")
    v = is_convex(f)
    assert v.status is Convexity.NOT_CONVEX and v.reason is Reason.MULTIVARIATE
    assert v.witness is not None and not_psd_exact(f, v.witness)


def test_unsupported_shape():
    with pytest.raises(ShapeError):
        is_convex(parse_text("1 + x1^2 + x1^3 + x1^4"))


@st.composite
def univariates(draw):
    d = draw(st.integers(1, 4))
    y = draw(st.integers(1, 2 * d - 1))
    a = draw(small_rationals(max_num=8, max_den=4))
    b = draw(small_rationals(max_num=8, max_den=4, positive=True))
    return SparsePoly.from_dict(1, {(0,): 1, (y,): a, (2 * d,): b})


@st.composite
def binary_forms(draw):
    d = draw(st.integers(1, 4))
    y = draw(st.integers(1, 2 * d - 1))
    bound = binary_form_bound(y, d)
    a = draw(st.one_of(small_rationals(max_num=8, max_den=4), st.sampled_from([bound, bound / 2, bound / 5]).filter(bool)))
    b = draw(small_rationals(max_num=8, max_den=4, positive=True))
    return SparsePoly.from_dict(2, {(0, 2 * d): 1, (y, 2 * d - y): a, (2 * d, 0): b})


@settings(max_examples=100, deadline=None)
@given(univariates())
def test_univariate_oracle(f):
    check_oracle(f)


@settings(max_examples=100, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(binary_forms())
def test_binary_form_oracle(f):
    check_oracle(f)


@settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(circuits(max_n=3).filter(lambda f: f.n >= 2 and f.c < 0))
def test_multivariate_witness(f):
    v = is_convex(f.base)
    assert v.status is Convexity.NOT_CONVEX
    assert v.witness is not None
    assert not_psd_exact(f.base, v.witness)
