"""Randomized property suites for the algebra kernel."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import sympy
from loguru import logger

from .algebra.evaluation import random_screen
from .algebra.fields import GF, QQ, CoefficientField
from .algebra.gcd import poly_gcd
from .algebra.polynomial import Polynomial
from .algebra.rational import RationalFunction, substitute
from .algebra.resultant import resultant
from .cremona import CremonaMap, compose, pullback, reduce_mod_p
from .errors import AlgebraError, ReductionError, UndefinedSubstitutionError
from .parser import parse_expression
from .report import PropertyResult
from .utils.formatting import format_expression

VARIABLES = ("x1", "x2", "x3")
IMAGE_VARIABLES = ("y1", "y2")
MAX_DRAWS_PER_CASE = 20


def random_coefficient(rng: random.Random, field: CoefficientField, bound: int = 9):
    if field.characteristic:
        return field.normalize(rng.randrange(1, field.characteristic))
    value = Fraction(rng.randint(-bound, bound) or 1, rng.choice((1, 1, 1, 2, 3)))
    return field.normalize(value)


def random_polynomial(
    rng: random.Random,
    field: CoefficientField,
    variables: Sequence[str] = VARIABLES,
    terms: int = 4,
    degree: int = 3,
) -> Polynomial:
    """A sparse polynomial with up to ``terms`` terms of total degree at most ``degree``."""
    data: Dict[Tuple[int, ...], object] = {}
    for _ in range(rng.randint(1, terms)):
        degree_left = rng.randint(0, degree)
        mono = [0] * len(variables)
        for _ in range(degree_left):
            mono[rng.randrange(len(variables))] += 1
        data[tuple(mono)] = random_coefficient(rng, field)
    return Polynomial.from_terms(field, variables, data)


def random_nonzero(rng: random.Random, field: CoefficientField, variables: Sequence[str] = VARIABLES, **kw) -> Polynomial:
    while True:
        p = random_polynomial(rng, field, variables, **kw)
        if not p.is_zero():
            return p


def random_rational(rng: random.Random, field: CoefficientField, variables: Sequence[str] = VARIABLES) -> RationalFunction:
    num = random_polynomial(rng, field, variables, terms=3, degree=2)
    den = random_nonzero(rng, field, variables, terms=2, degree=2)
    return RationalFunction.from_parts(num, den)


def to_sympy(p: Polynomial, symbols: Dict[str, sympy.Symbol]) -> sympy.Expr:
    total = sympy.Integer(0)
    for mono, coeff in p.terms.items():
        c = Fraction(coeff)
        term = sympy.Rational(c.numerator, c.denominator)
        for name, e in zip(p.variables, mono):
            if e:
                term *= symbols[name] ** e
        total += term
    return total


def _run(
    name: str, cases: int, rng: random.Random, check: Callable[[random.Random], Optional[str]]
) -> PropertyResult:
    """``check`` returns an empty string on success, None for a degenerate draw, else a counterexample.

    Degenerate draws are redrawn and do not count towards ``cases``.
    """
    held = 0
    for attempt in range(cases * MAX_DRAWS_PER_CASE):
        try:
            problem = check(rng)
        except AlgebraError as exc:
            problem = f"{type(exc).__name__}: {exc}"
        if problem is None:
            continue
        if problem:
            logger.warning("Property failed", property=name, case=held, attempt=attempt, problem=problem)
            return PropertyResult(name, held + 1, False, problem)
        held += 1
        if held == cases:
            logger.info("Property held", property=name, cases=cases, draws=attempt + 1)
            return PropertyResult(name, cases, True)
    logger.warning("Too many degenerate draws", property=name, cases=held)
    return PropertyResult(name, held, False, f"only {held} of {cases} draws were usable")


# -- individual properties -----------------------------------------------------------


def ring_axioms(field: CoefficientField) -> Callable[[random.Random], Optional[str]]:
    def check(rng: random.Random) -> Optional[str]:
        a, b, c = (random_polynomial(rng, field) for _ in range(3))
        if (a + b) + c != a + (b + c):
            return f"addition not associative at {a}, {b}, {c}"
        if a * b != b * a:
            return f"multiplication not commutative at {a}, {b}"
        if (a * b) * c != a * (b * c):
            return f"multiplication not associative at {a}, {b}, {c}"
        if a * (b + c) != a * b + a * c:
            return f"not distributive at {a}, {b}, {c}"
        if not (a - a).is_zero():
            return f"a - a is not zero at {a}"
        return ""

    return check


def field_inverse(field: CoefficientField) -> Callable[[random.Random], Optional[str]]:
    def check(rng: random.Random) -> Optional[str]:
        e = random_rational(rng, field)
        if e.is_zero():
            return None
        if e * e.inverse() != 1:
            return f"{e} times its inverse is not one"
        f = random_rational(rng, field)
        if (e + f) - f != e:
            return f"({e} + {f}) - {f} differs from {e}"
        return ""

    return check


def gcd_problem(a: Polynomial, b: Polynomial, planted: Polynomial, d: Polynomial) -> str:
    """Why ``d`` is not a gcd of ``a`` and ``b`` sharing ``planted``; empty if it is."""
    if not planted.divides(d):
        return f"gcd({a}, {b}) = {d} misses the planted factor {planted}"
    if not (d.divides(a) and d.divides(b)):
        return f"gcd({a}, {b}) = {d} does not divide both inputs"
    if not poly_gcd(a.divexact(d), b.divexact(d)).is_constant():
        return f"gcd({a}, {b}) = {d} leaves a common factor in the cofactors"
    return ""


def planted_gcd(rng: random.Random) -> Optional[str]:
    g = random_nonzero(rng, QQ, terms=3, degree=2)
    if g.is_constant():
        return None
    a = g * random_nonzero(rng, QQ, terms=3, degree=2)
    b = g * random_nonzero(rng, QQ, terms=3, degree=2)
    return gcd_problem(a, b, g, poly_gcd(a, b))


def canonical_form(rng: random.Random) -> Optional[str]:
    a = random_polynomial(rng, QQ)
    b = random_nonzero(rng, QQ)
    t = random_nonzero(rng, QQ, terms=2, degree=2)
    lhs = RationalFunction.from_parts(a * t, b * t)
    rhs = RationalFunction.from_parts(a, b)
    if lhs != rhs:
        return f"({a})*({t})/(({b})*({t})) is not reduced to {rhs}"
    return ""


def substitution_homomorphism(rng: random.Random) -> Optional[str]:
    a = random_polynomial(rng, QQ)
    b = random_polynomial(rng, QQ)
    images = {v: random_rational(rng, QQ, IMAGE_VARIABLES) for v in VARIABLES}
    try:
        sa, sb = substitute(a, images), substitute(b, images)
    except AlgebraError:
        return None
    if substitute(a * b, images) != sa * sb:
        return f"substitution does not respect the product of {a} and {b}"
    if substitute(a + b, images) != sa + sb:
        return f"substitution does not respect the sum of {a} and {b}"
    return ""


def resultant_oracle(rng: random.Random) -> Optional[str]:
    variables = VARIABLES[:2]
    symbols = {v: sympy.Symbol(v) for v in variables}
    a = random_nonzero(rng, QQ, variables, terms=3, degree=3)
    b = random_nonzero(rng, QQ, variables, terms=3, degree=3)
    if a.degree("x1") < 1 or b.degree("x1") < 1:
        return None
    ours = to_sympy(resultant(a, b, "x1"), symbols)
    oracle = sympy.Matrix(_sympy_sylvester(to_sympy(a, symbols), to_sympy(b, symbols), symbols["x1"])).det()
    if sympy.expand(ours - oracle) != 0:
        return f"resultant of {a} and {b} disagrees with the Sylvester determinant"
    return ""


def _sympy_sylvester(f: sympy.Expr, g: sympy.Expr, x: sympy.Symbol) -> List[List[sympy.Expr]]:
    fc = sympy.Poly(f, x).all_coeffs()
    gc = sympy.Poly(g, x).all_coeffs()
    m, n = len(fc) - 1, len(gc) - 1
    size = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + fc + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + gc + [0] * (size - n - 1 - i))
    return rows


def resultant_multiplicative(rng: random.Random) -> Optional[str]:
    variables = VARIABLES[:2]
    a, b, c = (random_nonzero(rng, QQ, variables, terms=2, degree=2) for _ in range(3))
    if min(p.degree("x1") for p in (a, b, c)) < 1:
        return None
    if resultant(a * b, c, "x1") != resultant(a, c, "x1") * resultant(b, c, "x1"):
        return f"Res({a} * {b}, {c}) is not the product of the resultants"
    return ""


def screen_agreement(seed: int) -> Callable[[random.Random], Optional[str]]:
    def check(rng: random.Random) -> Optional[str]:
        a, b = random_rational(rng, QQ), random_rational(rng, QQ)
        num = a.numerator * b.denominator + b.numerator * a.denominator
        same = RationalFunction.from_parts(num, a.denominator * b.denominator)
        if not random_screen(a + b, same, rng=random.Random(seed)):
            return f"screen separates two forms of {a + b}"
        moved = a + random_nonzero(rng, QQ)
        if random_screen(a, moved, rng=random.Random(seed)):
            return f"screen fails to separate {a} and {moved}"
        return ""

    return check


def print_parse_roundtrip(field: CoefficientField) -> Callable[[random.Random], Optional[str]]:
    def check(rng: random.Random) -> Optional[str]:
        e = random_rational(rng, field)
        text = format_expression(e)
        if parse_expression(text, VARIABLES, field) != e:
            return f"{text!r} does not parse back to itself"
        return ""

    return check


# -- Cremona maps --------------------------------------------------------------------

PLANE = ("x1", "x2")
PLANE_INVOLUTIONS = (
    ("x2", "x1"),
    ("1/x1", "x2/x1"),
    ("1/x1", "1/x2"),
    ("x1", "x1/x2"),
    ("-x1", "x2"),
    ("x1", "x1 - x2"),
    ("1/x2", "1/x1"),
)


def random_integer_polynomial(
    rng: random.Random, variables: Sequence[str], terms: int, degree: int, bound: int = 4
) -> Polynomial:
    while True:
        data: Dict[Tuple[int, ...], object] = {}
        for _ in range(rng.randint(1, terms)):
            mono = [0] * len(variables)
            for _ in range(rng.randint(0, degree)):
                mono[rng.randrange(len(variables))] += 1
            data[tuple(mono)] = rng.choice([c for c in range(-bound, bound + 1) if c])
        p = Polynomial.from_terms(QQ, variables, data)
        if not p.is_zero():
            return p


def random_map(rng: random.Random) -> CremonaMap:
    """Plane map over QQ with sparse low-degree images and small integer coefficients."""
    images = []
    for _ in PLANE:
        num = random_integer_polynomial(rng, PLANE, terms=2, degree=2)
        den = random_integer_polynomial(rng, PLANE, terms=2, degree=1)
        images.append(RationalFunction.from_parts(num, den))
    return CremonaMap.from_images(PLANE, images)


def compose_pullback(rng: random.Random) -> Optional[str]:
    a, b = random_map(rng), random_map(rng)
    e = random_rational(rng, QQ, PLANE)
    try:
        lhs = pullback(compose(a, b), e)
        rhs = pullback(a, pullback(b, e))
    except UndefinedSubstitutionError:
        return None
    if lhs != rhs:
        return f"pulling {e} back along the composite differs from pulling back in turn"
    return ""


def involution_double_pullback(rng: random.Random) -> Optional[str]:
    images = rng.choice(PLANE_INVOLUTIONS)
    s = CremonaMap.from_images(PLANE, [parse_expression(t, PLANE, QQ) for t in images])
    e = random_rational(rng, QQ, PLANE)
    try:
        twice = pullback(s, pullback(s, e))
    except UndefinedSubstitutionError:
        return None
    if twice != e:
        return f"{e} is not fixed by pulling back twice along {images}"
    return ""


def reduction_commutes_with_compose(p: int) -> Callable[[random.Random], Optional[str]]:
    def check(rng: random.Random) -> Optional[str]:
        a, b = random_map(rng), random_map(rng)
        try:
            lhs = reduce_mod_p(compose(a, b), p)
            rhs = compose(reduce_mod_p(a, p), reduce_mod_p(b, p))
        except (ReductionError, UndefinedSubstitutionError):
            return None
        if lhs != rhs:
            return f"reducing the composite modulo {p} differs from composing the reductions"
        return ""

    return check


def run_properties(seed: int = 0, scale: float = 1.0) -> List[PropertyResult]:
    """Every suite with its own generator derived from ``seed``."""

    def n(cases: int) -> int:
        return max(1, int(cases * scale))

    suites = [
        ("ring-axioms-qq", n(100), ring_axioms(QQ)),
        ("ring-axioms-gf101", n(100), ring_axioms(GF(101))),
        ("field-inverse-qq", n(50), field_inverse(QQ)),
        ("field-inverse-gf101", n(50), field_inverse(GF(101))),
        ("planted-gcd", n(100), planted_gcd),
        ("canonical-form", n(100), canonical_form),
        ("substitution-homomorphism", n(100), substitution_homomorphism),
        ("resultant-sylvester", n(50), resultant_oracle),
        ("resultant-multiplicative", n(30), resultant_multiplicative),
        ("screen-agreement", n(100), screen_agreement(seed)),
        ("print-parse-qq", n(100), print_parse_roundtrip(QQ)),
        ("print-parse-gf101", n(100), print_parse_roundtrip(GF(101))),
        ("compose-pullback", n(50), compose_pullback),
        ("involution-double-pullback", n(50), involution_double_pullback),
        ("reduction-compose-mod5", n(30), reduction_commutes_with_compose(5)),
        ("reduction-compose-mod7", n(30), reduction_commutes_with_compose(7)),
    ]
    results = []
    for index, (name, cases, check) in enumerate(suites):
        results.append(_run(name, cases, random.Random(f"{seed}:{index}"), check))
    return results
