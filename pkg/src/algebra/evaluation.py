"""Point evaluation and randomized identity screens."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Mapping, Optional, Sequence, Union

from ..errors import DenominatorVanishesError, ReductionError, UnknownVariableError
from .fields import PRIME_FIELD, Coefficient, CoefficientField
from .polynomial import Polynomial
from .rational import Expression, RationalFunction

DEFAULT_SCREEN_PRIME = (1 << 61) - 1
DEFAULT_SCREEN_POINTS = 20

Value = Union[int, Fraction]


def _polynomial_value(p: Polynomial, point: Mapping[str, Value], field: CoefficientField) -> Coefficient:
    values = []
    for v, d in zip(p.variables, p.degrees()):
        if d == 0:
            values.append(None)
        elif v in point:
            values.append(field.normalize(point[v]))
        else:
            raise UnknownVariableError(v)
    total: Coefficient = 0
    for mono, c in p.terms.items():
        term = c
        for e, x in zip(mono, values):
            if e:
                term = field.normalize(term * x**e)
        total = field.normalize(total + term)
    return total


def evaluate(e: Expression, point: Mapping[str, Value]) -> Coefficient:
    """Exact value of ``e`` at ``point`` in its own coefficient field."""
    rf = RationalFunction.coerce(e)
    field = rf.field
    den = _polynomial_value(rf.denominator, point, field)
    if den == 0:
        raise DenominatorVanishesError(f"denominator vanishes at {dict(point)}")
    num = _polynomial_value(rf.numerator, point, field)
    return field.div(num, den)


def screen_field(field: CoefficientField, prime: Optional[int] = None) -> CoefficientField:
    """The prime field random screens run in: ``field`` itself in characteristic p."""
    if field.kind == PRIME_FIELD:
        return field
    return CoefficientField.prime(prime or DEFAULT_SCREEN_PRIME)


def evaluate_mod(e: Expression, point: Mapping[str, int], prime: Optional[int] = None) -> int:
    """Value of ``e`` reduced into the screening field."""
    rf = RationalFunction.coerce(e)
    target = screen_field(rf.field, prime)
    try:
        den = _polynomial_value(rf.denominator, point, target)
    except ReductionError as exc:
        raise DenominatorVanishesError(str(exc)) from exc
    if den == 0:
        raise DenominatorVanishesError("denominator vanishes at the screening point")
    try:
        num = _polynomial_value(rf.numerator, point, target)
    except ReductionError as exc:
        raise DenominatorVanishesError(str(exc)) from exc
    return target.div(num, den)


def random_point(variables: Sequence[str], modulus: int, rng: random.Random) -> dict:
    return {v: rng.randrange(modulus) for v in variables}


def random_screen(
    a: Expression,
    b: Expression,
    points: Optional[int] = None,
    prime: Optional[int] = None,
    rng: Optional[random.Random] = None,
) -> bool:
    """False only if some valid point separates ``a`` and ``b``.

    Points where either side is undefined are skipped; at most three times the
    requested number of points are drawn.
    """
    ra, rb = RationalFunction.coerce(a), RationalFunction.coerce(b)
    target = screen_field(ra.field, prime)
    rng = rng or random.Random(0)
    wanted = points or DEFAULT_SCREEN_POINTS
    accepted = 0
    for _ in range(3 * wanted):
        point = random_point(ra.variables, target.characteristic, rng)
        try:
            same = evaluate_mod(ra, point, prime) == evaluate_mod(rb, point, prime)
        except DenominatorVanishesError:
            continue
        if not same:
            return False
        accepted += 1
        if accepted >= wanted:
            break
    return True
