"""Exact arithmetic: coefficient fields, sparse polynomials, reduced rational functions."""

from .evaluation import evaluate, evaluate_mod, random_screen
from .fields import GF, QQ, CoefficientField
from .gcd import poly_gcd
from .polynomial import (
    Monomial,
    Polynomial,
    equal_up_to_unit_monomial,
    partial_derivative,
    poly_arith,
    poly_divexact,
)
from .rational import RationalFunction, rf_arith, rf_equal, substitute
from .resultant import resultant, sylvester_matrix

__all__ = [
    "CoefficientField",
    "GF",
    "Monomial",
    "Polynomial",
    "QQ",
    "RationalFunction",
    "equal_up_to_unit_monomial",
    "evaluate",
    "evaluate_mod",
    "partial_derivative",
    "poly_arith",
    "poly_divexact",
    "poly_gcd",
    "random_screen",
    "resultant",
    "rf_arith",
    "rf_equal",
    "substitute",
    "sylvester_matrix",
]
