import os
import unittest
from fractions import Fraction

os.environ.setdefault("LOG_LEVEL", "ERROR")

from src.algebra import GF, QQ, Polynomial, equal_up_to_unit_monomial, partial_derivative, poly_arith, poly_divexact  # noqa: E402
from src.errors import DivisionByZeroError, NonExactDivisionError, UnknownVariableError, VariableMismatchError  # noqa: E402
from src.parser import parse_expression  # noqa: E402

XY = ("x1", "x2")


def P(text, variables=XY, field=QQ):
    return parse_expression(text, variables, field).as_polynomial()


class PolynomialArithmeticTests(unittest.TestCase):
    def test_zero_terms_are_dropped(self):
        p = Polynomial.from_terms(QQ, XY, {(1, 0): 2, (0, 1): 0})
        self.assertEqual(len(p), 1)
        self.assertEqual(p, P("2*x1"))

    def test_sum_and_product(self):
        a, b = P("x1 + x2"), P("x1 - x2")
        self.assertEqual(a * b, P("x1^2 - x2^2"))
        self.assertTrue((a - a).is_zero())
        self.assertEqual(a + 1, P("x1 + x2 + 1"))

    def test_prime_field_coefficients_wrap(self):
        a = P("x1 + 1", field=GF(2))
        self.assertEqual(a * a, P("x1^2 + 1", field=GF(2)))
        self.assertEqual(P("3*x1", field=GF(3)), 0)
        self.assertEqual(P("-x2", field=GF(3)), P("2*x2", field=GF(3)))

    def test_fraction_coefficients(self):
        p = P("x1/2 + 1/3")
        self.assertEqual(p.terms[(1, 0)], Fraction(1, 2))
        self.assertEqual(p.denominator_lcm(), 6)

    def test_power_and_degree(self):
        p = P("x1*x2^2 + x1^3")
        self.assertEqual(p.degree(), 3)
        self.assertEqual(p.degree("x2"), 2)
        self.assertEqual((p ** 2).degree("x1"), 6)
        self.assertEqual(P("5").degree("x1"), 0)

    def test_ring_mismatch_is_rejected(self):
        with self.assertRaises(VariableMismatchError):
            P("x1") + P("y1", ("y1",))
        with self.assertRaises(VariableMismatchError):
            P("x1") + P("x1", field=GF(5))

    def test_unknown_variable(self):
        with self.assertRaises(UnknownVariableError):
            Polynomial.variable(QQ, XY, "x3")

    def test_poly_arith_dispatch(self):
        a, b = P("x1"), P("x2")
        self.assertEqual(poly_arith("add", a, b), P("x1 + x2"))
        self.assertEqual(poly_arith("mul", a, b), P("x1*x2"))
        self.assertEqual(poly_arith("neg", a), P("-x1"))
        self.assertEqual(poly_arith("pow", a, 3), P("x1^3"))


class DivisionTests(unittest.TestCase):
    def test_exact_division(self):
        self.assertEqual(poly_divexact(P("x1^2 - x2^2"), P("x1 + x2")), P("x1 - x2"))
        self.assertEqual(P("x1^3*x2").divexact(P("x1*x2")), P("x1^2"))

    def test_non_exact_division(self):
        with self.assertRaises(NonExactDivisionError):
            P("x1^2 + 1").divexact(P("x1 + 1"))
        self.assertIsNone(P("x1^2 + 1").try_divexact(P("x1 + 1")))
        self.assertFalse(P("x1 + 1").divides(P("x1^2 + 1")))

    def test_division_by_zero(self):
        with self.assertRaises(DivisionByZeroError):
            P("x1").divexact(Polynomial.zero(QQ, XY))

    def test_division_over_gf2(self):
        a = P("x1^2 + 1", field=GF(2))
        self.assertEqual(a.divexact(P("x1 + 1", field=GF(2))), P("x1 + 1", field=GF(2)))


class StructureTests(unittest.TestCase):
    def test_derivative(self):
        p = P("x1^3*x2 + 2*x2^2")
        self.assertEqual(partial_derivative(p, "x1"), P("3*x1^2*x2"))
        self.assertEqual(p.derivative("x2"), P("x1^3 + 4*x2"))

    def test_derivative_in_characteristic_three(self):
        p = P("x1^3 + x1*x2", field=GF(3))
        self.assertEqual(p.derivative("x1"), P("x2", field=GF(3)))

    def test_coefficients_in(self):
        coeffs = P("x1^2*x2 + x1 + x2^3").coefficients_in("x1")
        self.assertEqual(sorted(coeffs), [0, 1, 2])
        self.assertEqual(coeffs[0], P("x2^3"))
        self.assertEqual(coeffs[2], P("x2"))

    def test_with_variables_embeds_and_drops(self):
        p = P("x2 + 1")
        wide = p.with_variables(("x1", "x2", "x3"))
        self.assertEqual(wide.variables, ("x1", "x2", "x3"))
        self.assertEqual(wide.with_variables(("x2",)), P("x2 + 1", ("x2",)))
        with self.assertRaises(VariableMismatchError):
            P("x1 + x2").with_variables(("x2",))

    def test_integer_primitive_has_positive_lead(self):
        scale, prim = P("-2/3*x1 + 4/3").to_integer_primitive()
        self.assertEqual(prim.terms[(1, 0)], 1)
        self.assertEqual(prim.terms[(0, 0)], -2)
        self.assertEqual(scale, Fraction(-2, 3))

    def test_equal_up_to_unit_monomial(self):
        g = P("x1 + x2 + 1")
        c, mono = equal_up_to_unit_monomial(g * P("-3*x1^2*x2"), g)
        self.assertEqual(c, -3)
        self.assertEqual(mono, (2, 1))
        self.assertIsNone(equal_up_to_unit_monomial(g * P("x1 + 1"), g))

    def test_leading_term_is_lexicographic(self):
        p = P("x2^5 + x1")
        self.assertEqual(p.leading_monomial(), (1, 0))
        self.assertEqual(p.leading_coefficient(), 1)


if __name__ == "__main__":
    unittest.main()
