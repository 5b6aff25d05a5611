"""Sylvester resultants by fraction-free elimination."""

from __future__ import annotations

from typing import List

from ..errors import ResultantError
from .polynomial import Polynomial

Matrix = List[List[Polynomial]]


def _dense_coefficients(p: Polynomial, name: str) -> List[Polynomial]:
    """Coefficients in ``name`` from the highest degree down."""
    coeffs = p.coefficients_in(name)
    zero = Polynomial.zero(p.field, p.variables)
    return [coeffs.get(k, zero) for k in range(p.degree(name), -1, -1)]


def sylvester_matrix(a: Polynomial, b: Polynomial, name: str) -> Matrix:
    """Rows of ``a``'s coefficients first, then ``b``'s."""
    a._check(b)
    m, n = a.degree(name), b.degree(name)
    size = m + n
    zero = Polynomial.zero(a.field, a.variables)
    rows: Matrix = []
    for coeffs, shifts in ((_dense_coefficients(a, name), n), (_dense_coefficients(b, name), m)):
        for s in range(shifts):
            row = [zero] * size
            row[s : s + len(coeffs)] = coeffs
            rows.append(row)
    return rows


def determinant(matrix: Matrix) -> Polynomial:
    """Bareiss fraction-free determinant; every division is exact."""
    size = len(matrix)
    if size == 0:
        raise ResultantError("empty matrix")
    m = [row[:] for row in matrix]
    sign = 1
    prev = None
    for k in range(size - 1):
        if m[k][k].is_zero():
            pivot = next((i for i in range(k + 1, size) if not m[i][k].is_zero()), None)
            if pivot is None:
                return Polynomial.zero(m[0][0].field, m[0][0].variables)
            m[k], m[pivot] = m[pivot], m[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                value = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = value.divexact(prev) if prev is not None and not value.is_zero() else value
            m[i][k] = m[i][k] * 0
        prev = m[k][k]
    det = m[size - 1][size - 1]
    return -det if sign < 0 else det


def resultant(a: Polynomial, b: Polynomial, name: str) -> Polynomial:
    """Res_name(a, b) as the determinant of the Sylvester matrix."""
    a._check(b)
    if a.is_zero() or b.is_zero():
        raise ResultantError("resultant of a zero polynomial")
    da, db = a.degree(name), b.degree(name)
    if da == 0 and db == 0:
        raise ResultantError(f"both polynomials are constant in {name}")
    if da == 0:
        return a**db
    if db == 0:
        return b**da
    return determinant(sylvester_matrix(a, b, name))
