"""Exact arithmetic kernel: rationals, polynomials, linear algebra, resultants, roots."""

from fractions import Fraction

from .linalg import bareiss_echelon, determinant, mat_vec, nullspace
from .poly import BiPoly, Poly, multiplicity, poly_gcd, squarefree_decomposition
from .resultant import interpolate, resultant, resultant_eliminate, sylvester_matrix
from .roots import (
    DEFAULT_RADIUS,
    ComplexBox,
    IsolatedRoot,
    factor_rational,
    isolate_roots,
    rational_roots,
)

Rational = Fraction

__all__ = [
    "BiPoly", "ComplexBox", "DEFAULT_RADIUS", "IsolatedRoot", "Poly", "Rational",
    "bareiss_echelon", "determinant", "factor_rational", "interpolate", "isolate_roots",
    "mat_vec", "multiplicity", "nullspace", "poly_gcd", "rational_roots", "resultant",
    "resultant_eliminate", "squarefree_decomposition", "sylvester_matrix",
]
