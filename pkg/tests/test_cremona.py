import os
import random
import unittest
from fractions import Fraction
from pathlib import Path

os.environ.setdefault("LOG_LEVEL", "ERROR")

from src.algebra import GF, QQ  # noqa: E402
from src.cremona import (  # noqa: E402
    CremonaMap,
    compose,
    is_identity,
    map_from_mapping,
    monomial_profile,
    pullback,
    reduce_mod_p,
    verify_involution,
)
from src.errors import ReductionError, VariableMismatchError  # noqa: E402
from src.parser import parse_expression  # noqa: E402
from src.properties import (  # noqa: E402
    _run,
    compose_pullback,
    involution_double_pullback,
    reduction_commutes_with_compose,
)
from src.scenarios import load_scenario  # noqa: E402

XY = ("x1", "x2")
SCENARIOS = Path(__file__).resolve().parents[1] / "scenarios"


def R(text, field=QQ):
    return parse_expression(text, XY, field)


def M(x1, x2, field=QQ):
    return CremonaMap.from_images(XY, [R(x1, field), R(x2, field)])


class CremonaMapTests(unittest.TestCase):
    def test_image_count_must_match(self):
        with self.assertRaises(VariableMismatchError):
            CremonaMap.from_images(XY, [R("x1")])
        with self.assertRaises(VariableMismatchError):
            map_from_mapping(XY, {"x1": R("x2")})

    def test_pullback_substitutes_simultaneously(self):
        m = M("x2", "x1")
        self.assertEqual(pullback(m, R("x1^2 + 3*x2")), R("x2^2 + 3*x1"))

    def test_compose_applies_the_inner_map_first(self):
        a, b = M("x1 + 1", "x2"), M("x1^2", "x2")
        e = R("x1*x2")
        self.assertEqual(pullback(compose(a, b), e), pullback(a, pullback(b, e)))
        self.assertEqual(compose(a, b).image("x1"), R("(x1 + 1)^2"))
        self.assertEqual(compose(b, a).image("x1"), R("x1^2 + 1"))

    def test_identity(self):
        self.assertTrue(is_identity(CremonaMap.identity(XY)))
        self.assertFalse(is_identity(M("x2", "x1")))


class InvolutionTests(unittest.TestCase):
    def test_swap_and_inversion_are_involutions(self):
        self.assertTrue(verify_involution(M("x2", "x1")))
        self.assertTrue(verify_involution(M("1/x1", "x2/x1")))

    def test_identity_is_not_an_involution(self):
        self.assertFalse(verify_involution(CremonaMap.identity(XY)))

    def test_order_three_is_rejected(self):
        self.assertFalse(verify_involution(M("x2", "1/(x1*x2)")))

    def test_reference_map_has_order_two(self):
        sigma = load_scenario(SCENARIOS / "sec2.json").map("sigma")
        self.assertTrue(verify_involution(sigma))


class MonomialProfileTests(unittest.TestCase):
    def test_swap(self):
        profile = monomial_profile(M("x2", "x1"), [R("x1"), R("x2")])
        self.assertEqual(profile.matrix, [[0, 1], [1, 0]])
        self.assertEqual(profile.determinant, -1)

    def test_laurent_images_and_constants(self):
        profile = monomial_profile(M("2/x1", "x1*x2"), [R("x1"), R("x2")])
        self.assertEqual(profile.matrix, [[-1, 1], [0, 1]])
        self.assertEqual(profile.column(1), [1, 1])
        self.assertEqual(profile.constants, [Fraction(2), Fraction(1)])

    def test_non_monomial_image(self):
        self.assertIsNone(monomial_profile(M("x1 + 1", "x2"), [R("x1"), R("x2")]))

    def test_generators_sharing_a_factor(self):
        profile = monomial_profile(M("x2", "x1"), [R("x1"), R("x1*x2")])
        self.assertIsNotNone(profile)
        self.assertEqual(profile.column(0), [-1, 1])
        self.assertEqual(profile.column(1), [0, 1])
        self.assertEqual(profile.determinant, -1)

    def test_generators_with_common_numerator_and_denominator_factors(self):
        profile = monomial_profile(M("x2", "x1"), [R("x1*x2"), R("x1/x2")])
        self.assertEqual(profile.matrix, [[1, 0], [0, -1]])
        self.assertEqual(profile.determinant, -1)

    def test_shared_factor_without_a_monomial_image(self):
        self.assertIsNone(monomial_profile(M("x2", "x1"), [R("x1 + x2"), R("(x1 + x2)*x1")]))


class ReductionTests(unittest.TestCase):
    def test_reductions_match_the_positive_characteristic_maps(self):
        sigma = load_scenario(SCENARIOS / "sec2.json").map("sigma")
        for name, p in (("sec3-char2", 2), ("sec3-char3", 3)):
            with self.subTest(prime=p):
                expected = load_scenario(SCENARIOS / f"{name}.json").map("sigma")
                self.assertEqual(reduce_mod_p(sigma, p), expected)

    def test_reduced_map_keeps_its_order(self):
        sigma = load_scenario(SCENARIOS / "sec2.json").map("sigma")
        self.assertTrue(verify_involution(reduce_mod_p(sigma, 3)))

    def test_denominator_divisible_by_p(self):
        with self.assertRaises(ReductionError):
            reduce_mod_p(M("x1/2", "x2"), 2)

    def test_only_rational_maps_reduce(self):
        with self.assertRaises(ReductionError):
            reduce_mod_p(M("x2", "x1", GF(5)), 5)

    def test_unit_scale_is_carried(self):
        reduced = reduce_mod_p(M("3*x1/(2*x2)", "x2"), 5)
        self.assertEqual(reduced.image("x1"), R("4*x1/x2", GF(5)))


class CremonaLawTests(unittest.TestCase):
    def assertHolds(self, name, cases, check):
        result = _run(name, cases, random.Random(name), check)
        self.assertTrue(result.passed, result.message)
        self.assertEqual(result.cases, cases)

    def test_pullback_along_a_composite(self):
        self.assertHolds("compose", 50, compose_pullback)

    def test_involutions_pull_back_to_the_identity(self):
        self.assertHolds("involution", 50, involution_double_pullback)

    def test_reduction_commutes_with_composition(self):
        for p in (5, 7):
            with self.subTest(prime=p):
                self.assertHolds(f"reduction-{p}", 25, reduction_commutes_with_compose(p))


if __name__ == "__main__":
    unittest.main()
