from fractions import Fraction

import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from circuitcert.certify import certify
from circuitcert.errors import CircuitError, DegenerateSimplexError
from circuitcert.lattice import enumerate_lattice_points
from circuitcert.mediated import (
    SimplexClass,
    Sufficiency,
    averages,
    h_simplex_sufficient_2d,
    is_mediated_set,
    is_sos,
    maximal_mediated_set,
)
from circuitcert.poly import circuit_from_parts, parse_text, validate_circuit

from helpers import even_simplices, interior_points
from oracles import _even, oracle_mediated, oracle_maximal, small_even_simplices


def test_example_simplices():
    m = maximal_mediated_set([(0, 0), (4, 2), (2, 4)])
    assert m.classification is SimplexClass.M
    assert (2, 2) not in m.delta_star
    assert len(m.delta_star) == 6

    h = maximal_mediated_set([(0, 0), (6, 0), (0, 6)])
    assert h.classification is SimplexClass.H
    assert len(h.delta_star) == 28

    h2 = maximal_mediated_set([(0, 0), (2, 4), (10, 6)])
    assert h2.classification is SimplexClass.H
    assert h_simplex_sufficient_2d([(0, 0), (2, 4), (10, 6)]) is Sufficiency.INCONCLUSIVE


def test_sufficient_conditions():
    assert h_simplex_sufficient_2d([(0, 0), (4, 2), (2, 4)]) is Sufficiency.INCONCLUSIVE
    assert h_simplex_sufficient_2d([(0, 0), (6, 0), (0, 6)]) is Sufficiency.BOUNDARY
    assert h_simplex_sufficient_2d([(0, 0, 0), (6, 0, 0), (0, 6, 0), (0, 0, 6)]) is Sufficiency.DILATE


def test_rejects_bad_simplices():
    with pytest.raises(DegenerateSimplexError):
        maximal_mediated_set([(0, 0), (2, 2), (4, 4)])
    with pytest.raises(CircuitError):
        maximal_mediated_set([(0, 0), (3, 0), (0, 2)])


def test_exhaustive_maximality_oracle():
    count = 0
    for vertices in small_even_simplices():
        assert maximal_mediated_set(vertices).delta_star == oracle_maximal(vertices), vertices
        count += 1
    assert count > 50


def reverse_sweep_fixpoint(points, vertices):
    """Delete one non-mediated point at a time, scanning from the largest point down."""
    current = set(points)
    changed = True
    while changed:
        changed = False
        for p in sorted(current, reverse=True):
            if p in vertices:
                continue
            evens = {q for q in current if _even(q)}
            if not any(tuple(2 * x - y for x, y in zip(p, s)) in evens for s in evens if s != p):
                current.discard(p)
                changed = True
                break
    return frozenset(current)


@settings(max_examples=50, deadline=None, suppress_health_check=[HealthCheck.filter_too_much, HealthCheck.too_slow])
@given(even_simplices(max_n=3, max_coord=10, max_points=400))
def test_order_independence_sandwich_and_mediation(vertices):
    res = maximal_mediated_set(vertices)
    pts = frozenset(enumerate_lattice_points(vertices))
    assert res.delta_star == reverse_sweep_fixpoint(pts, set(vertices))
    a_hat, _ = averages(vertices)
    assert a_hat <= res.delta_star <= pts
    assert is_mediated_set(res.delta_star, vertices)
    assert oracle_mediated(res.delta_star, set(vertices))


@st.composite
def agiforms(draw):
    vertices = draw(even_simplices(max_n=2, max_coord=10).filter(lambda v: bool(interior_points(v))))
    inner = draw(st.sampled_from(interior_points(vertices)))
    f = circuit_from_parts(vertices, inner, [Fraction(1)] * len(vertices), Fraction(-1))
    return f.with_coefficients(b=list(f.lambdas), c=Fraction(-1))


@settings(max_examples=50, deadline=None, suppress_health_check=[HealthCheck.filter_too_much, HealthCheck.too_slow])
@given(agiforms())
def test_agiform_sos_iff_inner_in_delta_star(f):
    star = maximal_mediated_set(f.vertices).delta_star
    assert certify(f).is_nonnegative
    assert is_sos(f).sos == (f.inner in star)


def test_motzkin_not_sos():
    f = validate_circuit(parse_text("1 + x1^4*x2^2 + x1^2*x2^4 - 3*x1^2*x2^2"))
    r = is_sos(f)
    assert not r.sos and r.reason == "y not in Delta*"


def test_not_nonnegative_is_not_sos():
    f = validate_circuit(parse_text("1 + x1^4*x2^2 + x1^2*x2^4 - 4*x1^2*x2^2"))
    assert is_sos(f).reason == "not nonnegative"


def test_sos_on_h_simplex():
    f = validate_circuit(parse_text("1 + x1^6 + x2^6 - 3*x1^2*x2^2"))
    assert is_sos(f).sos
