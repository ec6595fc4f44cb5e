"""Certificates for polynomials supported on circuits.

Exact nonnegativity, sums-of-squares and SONC decisions, amoeba solidness,
convexity, and the polygon SOS criterion for agiforms.
"""

__version__ = "0.1.0"

from .amoeba import classify_point, is_solid, psi_f, raster, thresholds_at
from .certify import (
    a_discriminant_vanishes,
    certify,
    compare_c_theta,
    decide_nonnegativity,
    enumerate_boundary_zeros,
    norm_minimizer,
    reduce_boundary_inner_point,
)
from .convexity import is_convex
from .errors import (
    BoundaryInnerPoint,
    CircuitCertError,
    CircuitError,
    DegenerateSimplexError,
    DimensionError,
    ParseError,
    PrecisionError,
    ShapeError,
)
from .lattice import enumerate_lattice_points, gale_dual, standard_form, support_matrix, zero_standard_form
from .mediated import averages, h_simplex_sufficient_2d, is_sos, maximal_mediated_set
from .poly import CircuitPoly, MonomialSquares, SparsePoly, parse_poly, validate_circuit
from .polytri import PolygonSupport, enumerate_triangulations, necessity_check_sos, universal_sos_criterion
from .sonc import (
    decompose_multi_inner,
    find_positive_minimizer,
    orthant_flip_search,
    sonc_certificate,
    verify_certificate,
)

__all__ = [
    "BoundaryInnerPoint",
    "CircuitCertError",
    "CircuitError",
    "CircuitPoly",
    "DegenerateSimplexError",
    "DimensionError",
    "MonomialSquares",
    "ParseError",
    "PolygonSupport",
    "PrecisionError",
    "ShapeError",
    "SparsePoly",
    "a_discriminant_vanishes",
    "averages",
    "certify",
    "classify_point",
    "compare_c_theta",
    "decide_nonnegativity",
    "decompose_multi_inner",
    "enumerate_boundary_zeros",
    "enumerate_lattice_points",
    "enumerate_triangulations",
    "find_positive_minimizer",
    "gale_dual",
    "h_simplex_sufficient_2d",
    "is_convex",
    "is_solid",
    "is_sos",
    "maximal_mediated_set",
    "necessity_check_sos",
    "norm_minimizer",
    "orthant_flip_search",
    "parse_poly",
    "psi_f",
    "raster",
    "reduce_boundary_inner_point",
    "sonc_certificate",
    "standard_form",
    "support_matrix",
    "thresholds_at",
    "universal_sos_criterion",
    "validate_circuit",
    "verify_certificate",
    "zero_standard_form",
]
