import math
from fractions import Fraction

from hypothesis import HealthCheck, given, settings, strategies as st

from circuitcert.certify import (
    Relation,
    Status,
    a_discriminant_vanishes,
    certify,
    compare_c_theta,
    decide_nonnegativity,
    enumerate_boundary_zeros,
    norm_minimizer,
    reduce_boundary_inner_point,
)
from circuitcert.lattice import standard_form
from circuitcert.poly import circuit_from_parts, parse_text, validate_circuit

from helpers import circuits, even_simplices, interior_points, small_rationals
from oracles import grid_min_ok

MOTZKIN = validate_circuit(parse_text("1 + x1^4*x2^2 + x1^2*x2^4 - 3*x1^2*x2^2"))


def test_motzkin_equal_boundary():
    cmp = compare_c_theta(MOTZKIN)
    assert cmp.relation is Relation.EQUAL
    assert cmp.exactness == "exact"
    assert cmp.theta == 3.0
    v = decide_nonnegativity(MOTZKIN)
    assert v.status is Status.BOUNDARY
    assert sorted(v.zeros) == sorted([(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)])
    assert norm_minimizer(MOTZKIN).s_star == (0.0, 0.0)


def test_two_sqrt_two():
    f = validate_circuit(parse_text("1/4 + 2*x1^2*x2^4 + x1^4*x2^4 - 5/2*x1^2*x2^3"))
    cmp = compare_c_theta(f)
    assert cmp.relation is Relation.LESS
    assert abs(cmp.theta - 2 * math.sqrt(2)) < 1e-12
    assert decide_nonnegativity(f).status is Status.NONNEGATIVE


def test_negative_instance_has_exact_witness():
    f = MOTZKIN.with_coefficients(c=Fraction(-4))
    v = decide_nonnegativity(f)
    assert v.status is Status.NOT_NONNEGATIVE
    assert f.base.evaluate(v.witness_exact) < 0


def test_positive_even_inner_is_monomial_squares():
    v = certify(parse_text("1 + x1^4*x2^2 + x1^2*x2^4 + 3*x1^2*x2^2"))
    assert v.is_nonnegative


def test_a_discriminant():
    assert a_discriminant_vanishes(MOTZKIN)
    assert not a_discriminant_vanishes(MOTZKIN.with_coefficients(c=Fraction(-2)))


def test_boundary_inner_point_reduces_to_face():
    p = parse_text("1 + x1^2 + x2^4 - 2*x1*x2^2")
    reduced = reduce_boundary_inner_point(p)
    assert reduced.support == ((2, 0), (1, 2), (0, 4))
    assert certify(p).is_nonnegative
    bad = parse_text("1 + x1^2 + x2^4 - 3*x1*x2^2")
    v = certify(bad)
    assert v.status is Status.NOT_NONNEGATIVE
    assert bad.evaluate(v.witness_exact) < 0


def test_odd_inner_exponent_sign_symmetry():
    # y = (1,1): the sign of c can be absorbed, so only |c| matters
    pos = certify(parse_text("1 + x1^2 + x2^2 + 2*x1*x2"))
    neg = certify(parse_text("1 + x1^2 + x2^2 - 2*x1*x2"))
    assert pos.status == neg.status


@settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])
@given(circuits(max_n=3))
def test_sampling_oracle(f):
    v = decide_nonnegativity(f)
    if v.status is Status.NOT_NONNEGATIVE:
        point = v.witness_exact if v.witness_exact is not None else v.witness
        assert f.base.evaluate(point) < 0
    else:
        assert grid_min_ok(f)


@settings(max_examples=50, deadline=None)
@given(circuits(max_n=3), small_rationals(positive=True))
def test_scaling_equivariance(f, t):
    g = f.with_coefficients(b=[t * x for x in f.b], c=t * f.c)
    assert decide_nonnegativity(f).status is decide_nonnegativity(g).status


@settings(max_examples=50, deadline=None)
@given(circuits(max_n=3))
def test_theta_invariant_under_standard_form(f):
    image = validate_circuit(standard_form(f).image, require_even=False)
    a = compare_c_theta(f).theta_log
    b = compare_c_theta(image).theta_log
    assert abs(float(a - b)) <= 1e-12 * max(1.0, abs(float(a)))


@st.composite
def agiforms(draw):
    vertices = draw(even_simplices(max_n=3, max_coord=8).filter(lambda v: bool(interior_points(v))))
    inner = draw(st.sampled_from(interior_points(vertices)))
    f = circuit_from_parts(vertices, inner, [Fraction(1)] * len(vertices), Fraction(-1))
    t = draw(small_rationals(positive=True))
    # b_j = t * lambda_j gives Theta = t, so c = -t sits exactly on the boundary
    return f.with_coefficients(b=[t * x for x in f.lambdas], c=-t)


@settings(max_examples=50, deadline=None, suppress_health_check=[HealthCheck.filter_too_much, HealthCheck.too_slow])
@given(agiforms())
def test_equality_branch_is_exact(f):
    cmp = compare_c_theta(f)
    assert cmp.relation is Relation.EQUAL
    assert cmp.exactness == "exact"


@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.filter_too_much, HealthCheck.too_slow])
@given(agiforms())
def test_boundary_zeros_sit_on_the_minimizer_torus(f):
    s = norm_minimizer(f).s_star
    zeros = enumerate_boundary_zeros(f)
    assert zeros
    for z in zeros:
        for zj, sj in zip(z, s):
            assert abs(abs(zj) - math.exp(sj)) <= 1e-8 * max(1.0, math.exp(sj))
        assert abs(f.base.evaluate(z)) <= 1e-8 * sum(abs(float(q)) for q in f.base.as_dict().values()) * max(
            1.0, max(abs(x) for x in z)
        ) ** max(sum(e) for e in f.base.support)


def test_precision_ladder_start_is_respected():
    assert compare_c_theta(MOTZKIN, precision=512).relation is Relation.EQUAL
