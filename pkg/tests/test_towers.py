import os
import unittest

os.environ.setdefault("LOG_LEVEL", "ERROR")

from src.algebra import QQ  # noqa: E402
from src.cremona import CremonaMap  # noqa: E402
from src.errors import DegreeError, VariableMismatchError  # noqa: E402
from src.parser import parse_expression  # noqa: E402
from src.towers import (  # noqa: E402
    ChangeOfVariables,
    QuadraticDescentWitness,
    QuadraticRoot,
    Relation,
    chain,
    check_generation,
    check_identity,
    check_quadratic_descent,
    check_singular_substitution,
    check_solution,
    check_transport,
    eliminate,
    reduce_quadratic,
    solve_linear_variable,
    transport_relation,
    verify_generation,
    verify_induced_action,
    verify_invariance,
    verify_quadratic_descent,
    verify_relation,
    verify_identity,
    verify_singular_substitution,
)

X = ("x1", "x2")
Y = ("y1", "y2")
Z = ("z1", "z2")


def R(text, variables):
    return parse_expression(text, variables, QQ)


def P(text, variables):
    return R(text, variables).as_polynomial()


def system(name, old, new, forward, backward=None):
    fwd = tuple(R(t, old) for t in forward)
    back = tuple(R(t, new) for t in backward) if backward is not None else None
    return ChangeOfVariables(name, old, new, fwd, back)


SWAP = CremonaMap.from_images(X, [R("x2", X), R("x1", X)])
SUM_DIFF = system("y", X, Y, ["x1 + x2", "x1 - x2"], ["(y1 + y2)/2", "(y1 - y2)/2"])


class GenerationTests(unittest.TestCase):
    def test_inverse_pair_generates(self):
        self.assertTrue(verify_generation(SUM_DIFF))

    def test_wrong_inverse_names_the_variable(self):
        broken = system("y", X, Y, ["x1 + x2", "x1 - x2"], ["(y1 + y2)/2", "y1 - y2"])
        outcome = check_generation(broken)
        self.assertFalse(outcome.passed)
        self.assertEqual(outcome.detail["variable"], "x2")

    def test_missing_backward(self):
        with self.assertRaises(VariableMismatchError):
            check_generation(system("y", X, Y, ["x1", "x2"]))

    def test_chain_composes_forward_and_backward(self):
        outer = system("z", Y, Z, ["y1*y2", "y2"], ["z1/z2", "z2"])
        both = chain(outer, SUM_DIFF)
        self.assertEqual(both.old, X)
        self.assertEqual(both.forward[0], R("x1^2 - x2^2", X))
        self.assertTrue(verify_generation(both))
        self.assertEqual(both.lift(R("z1 + z2", Z)), R("x1^2 - x2^2 + x1 - x2", X))


class RelationTests(unittest.TestCase):
    CUSP = system("y", ("x1",), Y, ["x1^2", "x1^3"])

    def test_relation_holds(self):
        self.assertTrue(verify_relation(Relation("f", P("y1^3 - y2^2", Y)), self.CUSP))
        self.assertFalse(verify_relation(Relation("f", P("y1^2 - y2^3", Y)), self.CUSP))

    def test_zero_relation_is_rejected(self):
        self.assertFalse(verify_relation(Relation("f", P("0", Y)), self.CUSP))

    def test_eliminate_finds_the_cusp(self):
        self.assertEqual(eliminate(self.CUSP), P("y1^3 - y2^2", Y))

    def test_eliminate_rejects_overlapping_names(self):
        with self.assertRaises(VariableMismatchError):
            eliminate(system("x", X, X, ["x1", "x2"]))


class TransportTests(unittest.TestCase):
    def test_cofactor_is_a_unit_monomial(self):
        rewrite = {"y1": R("z1*z2^2", Z), "y2": R("z2", Z)}
        old = Relation("f", P("y1 - y2^2", Y))
        new = Relation("g", P("z1 - 1", Z))
        self.assertEqual(transport_relation(old, rewrite, new), (1, (0, 2)))

    def test_wrong_target(self):
        rewrite = {"y1": R("z1*z2^2", Z), "y2": R("z2", Z)}
        outcome = check_transport(Relation("f", P("y1 - y2^2", Y)), rewrite, Relation("g", P("z1 + 1", Z)))
        self.assertFalse(outcome.passed)
        self.assertEqual(outcome.residue, P("z1*z2^2 - z2^2", Z))

    def test_quadratic_root_is_reduced(self):
        UT = ("u1", "t")
        root = QuadraticRoot("t", P("0", UT), P("-u1", UT))
        rewrite = {"y1": R("t", UT), "y2": R("u1", UT)}
        self.assertEqual(
            transport_relation(Relation("f", P("y1^2 + y2", Y)), rewrite, Relation("g", P("u1", ("u1",))), root),
            (2, (0,)),
        )
        outcome = check_transport(Relation("f", P("y1 + y2", Y)), rewrite, Relation("g", P("u1", ("u1",))), root)
        self.assertFalse(outcome.passed)
        self.assertIn("linear", outcome.detail["reason"])

    def test_reduce_quadratic(self):
        UT = ("u1", "t")
        root = QuadraticRoot("t", P("u1", UT), P("1", UT))
        low, high = reduce_quadratic(P("t^3", UT), root)
        # t^2 = u1*t - 1, t^3 = (u1^2 - 1)*t - u1
        self.assertEqual(low, P("-u1", UT))
        self.assertEqual(high, P("u1^2 - 1", UT))


class SolveTests(unittest.TestCase):
    U = ("u1", "u2", "u3")

    def test_linear_variable(self):
        r = Relation("urel", P("u1 + u1^2 - u3", self.U))
        solution = solve_linear_variable(r, "u3")
        self.assertEqual(solution, R("u1 + u1^2", self.U))
        self.assertTrue(check_solution(r, "u3", solution).passed)
        self.assertFalse(check_solution(r, "u3", R("u1", self.U)).passed)

    def test_rational_solution(self):
        r = Relation("g", P("u2*u3 - u1", self.U))
        self.assertEqual(solve_linear_variable(r, "u3"), R("u1/u2", self.U))

    def test_nonlinear_variable(self):
        with self.assertRaises(DegreeError):
            solve_linear_variable(Relation("urel", P("u1 + u1^2 - u3", self.U)), "u1")


class InvarianceTests(unittest.TestCase):
    def test_symmetric_functions_are_fixed(self):
        self.assertTrue(verify_invariance(SWAP, R("x1 + x2", X)))
        self.assertTrue(verify_invariance(SWAP, R("x1*x2/(x1^2 + x2^2)", X)))
        self.assertFalse(verify_invariance(SWAP, R("x1", X)))

    def test_induced_action(self):
        self.assertTrue(verify_induced_action(SWAP, SUM_DIFF, {"y1": R("y1", Y), "y2": R("-y2", Y)}))
        self.assertFalse(verify_induced_action(SWAP, SUM_DIFF, {"y2": R("y2", Y)}))

    def test_identity(self):
        self.assertTrue(check_identity(R("(x1^2 - 1)/(x1 - 1)", X), R("x1 + 1", X)).passed)
        outcome = check_identity(R("x1", X), R("x2", X))
        self.assertEqual(outcome.residue, R("x1 - x2", X))
        self.assertFalse(verify_identity(R("x1", X), R("x2", X)))


class DescentTests(unittest.TestCase):
    AB = ("a", "b")

    def witness(self, norm="b"):
        return QuadraticDescentWitness(
            t=R("x1", X),
            sigma_t=R("x2", X),
            invariants={"a": R("x1 + x2", X), "b": R("x1*x2", X)},
            trace=R("a", self.AB),
            norm=R(norm, self.AB),
        )

    def test_root_of_the_symmetric_quadratic(self):
        self.assertTrue(verify_quadratic_descent(self.witness(), SWAP))

    def test_wrong_norm(self):
        outcome = check_quadratic_descent(self.witness("a"), SWAP)
        self.assertFalse(outcome.passed)
        self.assertEqual(outcome.detail["failed"], "norm")

    def test_fixed_element_is_not_a_root(self):
        w = QuadraticDescentWitness(R("x1 + x2", X), R("x1 + x2", X), {}, R("0", X), R("0", X))
        self.assertEqual(check_quadratic_descent(w, SWAP).detail["failed"], "t is fixed")


class SingularSubstitutionTests(unittest.TestCase):
    V = ("v1", "v2", "v3")

    def test_node_along_a_line(self):
        h = Relation("h", P("v2^2 - v1^2*(v1 + v3)", self.V))
        locus = {"v1": R("0", self.V), "v2": R("0", self.V)}
        outcome = check_singular_substitution(h, locus, ["v1", "v2"])
        self.assertTrue(outcome.passed)
        self.assertEqual(outcome.detail["other_partials_vanish"], {"v3": True})

    def test_point_off_the_surface(self):
        h = Relation("h", P("v2^2 - v1^2*(v1 + v3)", self.V))
        locus = {"v1": R("1", self.V), "v2": R("1", self.V)}
        self.assertFalse(verify_singular_substitution(h, locus))

    def test_smooth_point(self):
        h = Relation("h", P("v2 - v1^2", self.V))
        locus = {"v1": R("v3", self.V), "v2": R("v3^2", self.V)}
        outcome = check_singular_substitution(h, locus)
        self.assertFalse(outcome.passed)
        self.assertEqual(outcome.detail["failed"], "d/dv1")


if __name__ == "__main__":
    unittest.main()
