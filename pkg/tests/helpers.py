"""Random instance builders shared by the property tests."""

from fractions import Fraction
from itertools import product

from hypothesis import reject, strategies as st

from circuitcert.lattice import barycentric, enumerate_lattice_points, is_affinely_independent
from circuitcert.poly import circuit_from_parts


def small_rationals(max_num=20, max_den=20, positive=False):
    lo = 1 if positive else -max_num
    return st.builds(
        Fraction,
        st.integers(lo, max_num).filter(lambda k: k != 0),
        st.integers(1, max_den),
    )


@st.composite
def even_simplices(draw, max_n=3, max_coord=10, max_points=None):
    n = draw(st.integers(1, max_n))
    even = st.integers(0, max_coord // 2).map(lambda k: 2 * k)
    pts = draw(
        st.lists(st.tuples(*[even] * n), min_size=n + 1, max_size=n + 1, unique=True).filter(
            is_affinely_independent
        )
    )
    if max_points is not None and len(enumerate_lattice_points(pts)) > max_points:
        reject()
    return tuple(sorted(pts))


def interior_points(vertices):
    return [p for p in enumerate_lattice_points(vertices) if all(x > 0 for x in barycentric(vertices, p))]


@st.composite
def circuits(draw, max_n=3, max_coord=10):
    """Circuit polynomials with a strictly interior inner point."""
    vertices = draw(even_simplices(max_n=max_n, max_coord=max_coord))
    rnd = draw(st.randoms(use_true_random=False))
    inner = None
    for _ in range(40):
        cand = tuple(rnd.randint(min(v[i] for v in vertices), max(v[i] for v in vertices)) for i in range(len(vertices[0])))
        if all(x > 0 for x in barycentric(vertices, cand)):
            inner = cand
            break
    if inner is None:
        reject()
    b = draw(st.lists(small_rationals(positive=True), min_size=len(vertices), max_size=len(vertices)))
    c = draw(small_rationals())
    return circuit_from_parts(vertices, inner, b, c)


def grid(n, lo=-3.0, hi=3.0, steps=41):
    axis = [lo + (hi - lo) * i / (steps - 1) for i in range(steps)]
    return product(axis, repeat=n)


def random_circuit(rng, n, max_coord=10, max_num=20, max_den=20):
    """Seeded counterpart of ``circuits`` for the acceptance suite."""
    while True:
        vertices = [tuple(2 * rng.randint(0, max_coord // 2) for _ in range(n)) for _ in range(n + 1)]
        if len(set(vertices)) < n + 1 or not is_affinely_independent(vertices):
            continue
        for _ in range(40):
            cand = tuple(rng.randint(min(v[i] for v in vertices), max(v[i] for v in vertices)) for i in range(n))
            if all(x > 0 for x in barycentric(vertices, cand)):
                b = [Fraction(rng.randint(1, max_num), rng.randint(1, max_den)) for _ in vertices]
                c = Fraction(rng.choice([-1, 1]) * rng.randint(1, max_num), rng.randint(1, max_den))
                return circuit_from_parts(sorted(vertices), cand, b, c)
