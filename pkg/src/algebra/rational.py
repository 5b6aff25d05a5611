"""Reduced rational functions and simultaneous substitution."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from ..errors import DivisionByZeroError, UndefinedSubstitutionError, UnknownVariableError, VariableMismatchError
from .fields import QQ, CoefficientField
from .gcd import poly_gcd
from .polynomial import Polynomial, Scalar

Expression = Union[Polynomial, "RationalFunction"]


def _unit_normalize(num: Polynomial, den: Polynomial) -> Tuple[Polynomial, Polynomial]:
    if num.is_zero():
        return num, Polynomial.one(den.field, den.variables)
    if den.field == QQ:
        scale, prim = den.to_integer_primitive()
        if scale != 1:
            num = num.scale(1 / scale)
            den = Polynomial._make(QQ, den.variables, dict(prim.terms))
        return num, den
    lc = den.leading_coefficient()
    if lc != 1:
        inv = den.field.inverse(lc)
        num, den = num.scale(inv), den.scale(inv)
    return num, den


def _cancel(num: Polynomial, den: Polynomial, hints: Iterable[Polynomial] = ()) -> Tuple[Polynomial, Polynomial]:
    """Remove every common factor: known factors first, then a full gcd."""
    if den.is_zero():
        raise DivisionByZeroError("zero denominator")
    if num.is_zero() or den.is_constant():
        return _unit_normalize(num, den)
    for h in hints:
        if h.is_constant():
            continue
        while not den.is_constant():
            q_den = den.try_divexact(h)
            if q_den is None:
                break
            q_num = num.try_divexact(h)
            if q_num is None:
                break
            num, den = q_num, q_den
    if not den.is_constant():
        g = poly_gcd(num, den)
        if not g.is_constant():
            num, den = num.divexact(g), den.divexact(g)
    return _unit_normalize(num, den)


@dataclass(frozen=True, slots=True, eq=False)
class RationalFunction:
    numerator: Polynomial
    denominator: Polynomial

    @classmethod
    def _make(cls, num: Polynomial, den: Polynomial) -> "RationalFunction":
        obj = object.__new__(cls)
        object.__setattr__(obj, "numerator", num)
        object.__setattr__(obj, "denominator", den)
        return obj

    @classmethod
    def from_parts(
        cls,
        num: Polynomial,
        den: Polynomial,
        hints: Iterable[Polynomial] = (),
    ) -> "RationalFunction":
        num._check(den)
        return cls._make(*_cancel(num, den, hints))

    @classmethod
    def from_polynomial(cls, p: Polynomial) -> "RationalFunction":
        return cls._make(p, Polynomial.one(p.field, p.variables))

    @classmethod
    def constant(cls, field: CoefficientField, variables: Sequence[str], value: Scalar) -> "RationalFunction":
        return cls.from_polynomial(Polynomial.constant(field, variables, value))

    @classmethod
    def variable(cls, field: CoefficientField, variables: Sequence[str], name: str) -> "RationalFunction":
        return cls.from_polynomial(Polynomial.variable(field, variables, name))

    @classmethod
    def coerce(cls, e: Union[Expression, Scalar], like: Optional["RationalFunction"] = None) -> "RationalFunction":
        if isinstance(e, RationalFunction):
            return e
        if isinstance(e, Polynomial):
            return cls.from_polynomial(e)
        if isinstance(e, (int, Fraction)) and like is not None:
            return cls.constant(like.field, like.variables, e)
        raise TypeError(f"cannot use {type(e).__name__} as a rational function")

    # -- inspection -------------------------------------------------------

    @property
    def field(self) -> CoefficientField:
        return self.numerator.field

    @property
    def variables(self) -> Tuple[str, ...]:
        return self.numerator.variables

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def is_polynomial(self) -> bool:
        return self.denominator.is_constant()

    def is_constant(self) -> bool:
        return self.numerator.is_constant() and self.denominator.is_constant()

    def as_polynomial(self) -> Polynomial:
        if not self.is_polynomial():
            raise VariableMismatchError("rational function has a nonconstant denominator")
        return self.numerator.scale(self.field.inverse(self.denominator.constant_value()))

    def used_variables(self) -> Tuple[str, ...]:
        used = set(self.numerator.used_variables()) | set(self.denominator.used_variables())
        return tuple(v for v in self.variables if v in used)

    def with_variables(self, variables: Sequence[str]) -> "RationalFunction":
        return RationalFunction._make(
            self.numerator.with_variables(variables), self.denominator.with_variables(variables)
        )

    # -- equality ---------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, RationalFunction):
            return self.numerator == other.numerator and self.denominator == other.denominator
        if isinstance(other, Polynomial):
            return self.is_polynomial() and self.as_polynomial() == other
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.as_polynomial() == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.numerator, self.denominator))

    def __repr__(self) -> str:
        from ..utils.formatting import format_expression

        return f"RationalFunction({format_expression(self)!r}, {self.field})"

    # -- arithmetic -------------------------------------------------------

    def _other(self, other: Union[Expression, Scalar]) -> "RationalFunction":
        other = RationalFunction.coerce(other, self)
        self.numerator._check(other.numerator)
        return other

    def __add__(self, other: Union[Expression, Scalar]) -> "RationalFunction":
        other = self._other(other)
        a, b = self.numerator, self.denominator
        c, d = other.numerator, other.denominator
        if b.is_one() and d.is_one():
            return RationalFunction._make(a + c, b)
        g = poly_gcd(b, d)
        if g.is_constant():
            return RationalFunction._make(*_unit_normalize(a * d + c * b, b * d))
        b1, d1 = b.divexact(g), d.divexact(g)
        t = a * d1 + c * b1
        g2 = poly_gcd(t, g)
        if not g2.is_constant():
            t, g = t.divexact(g2), g.divexact(g2)
        return RationalFunction._make(*_unit_normalize(t, b1 * d1 * g))

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction._make(-self.numerator, self.denominator)

    def __sub__(self, other: Union[Expression, Scalar]) -> "RationalFunction":
        return self + (-self._other(other))

    def __rsub__(self, other: Union[Expression, Scalar]) -> "RationalFunction":
        return self._other(other) - self

    def __mul__(self, other: Union[Expression, Scalar]) -> "RationalFunction":
        other = self._other(other)
        a, b = self.numerator, self.denominator
        c, d = other.numerator, other.denominator
        if a.is_zero() or c.is_zero():
            return RationalFunction.constant(self.field, self.variables, 0)
        g1 = poly_gcd(a, d)
        g2 = poly_gcd(c, b)
        if not g1.is_constant():
            a, d = a.divexact(g1), d.divexact(g1)
        if not g2.is_constant():
            c, b = c.divexact(g2), b.divexact(g2)
        return RationalFunction._make(*_unit_normalize(a * c, b * d))

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.is_zero():
            raise DivisionByZeroError("inverse of the zero rational function")
        return RationalFunction._make(*_unit_normalize(self.denominator, self.numerator))

    def __truediv__(self, other: Union[Expression, Scalar]) -> "RationalFunction":
        return self * self._other(other).inverse()

    def __rtruediv__(self, other: Union[Expression, Scalar]) -> "RationalFunction":
        return self._other(other) * self.inverse()

    def __pow__(self, n: int) -> "RationalFunction":
        if not isinstance(n, int):
            raise TypeError("rational function exponent must be an integer")
        if n < 0:
            return self.inverse() ** (-n)
        return RationalFunction._make(self.numerator**n, self.denominator**n)


def rf_arith(
    op: str,
    a: RationalFunction,
    b: Union[RationalFunction, int, None] = None,
) -> RationalFunction:
    """Dispatch ``add``/``sub``/``mul``/``div``/``neg``/``inv``/``pow``."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "neg":
        return -a
    if op == "inv":
        return a.inverse()
    if op == "pow":
        return a**b
    raise ValueError(f"unknown rational function operation {op!r}")


def rf_equal(a: Expression, b: Expression, screen: bool = True) -> bool:
    """Exact equality; a modular screen rejects obviously different inputs first."""
    a, b = RationalFunction.coerce(a), RationalFunction.coerce(b)
    a.numerator._check(b.numerator)
    if screen:
        from .evaluation import random_screen

        if not random_screen(a, b):
            return False
    return a.numerator * b.denominator == b.numerator * a.denominator


# -- substitution -----------------------------------------------------------


def _target(assignment: Mapping[str, RationalFunction], e: Expression) -> Tuple[CoefficientField, Tuple[str, ...]]:
    images = list(assignment.values())
    if not images:
        return e.field, e.variables
    first = images[0]
    for img in images[1:]:
        if img.variables != first.variables or img.field != first.field:
            raise VariableMismatchError("substitution images live in different rings")
    if first.field != e.field:
        raise VariableMismatchError(f"fields {e.field} != {first.field}")
    return first.field, first.variables


def _evaluate_polynomial(
    p: Polynomial,
    assignment: Mapping[str, RationalFunction],
    field: CoefficientField,
    variables: Tuple[str, ...],
) -> Tuple[Polynomial, Dict[str, int]]:
    """Numerator of ``p`` at the images over the common denominator ``prod d_v^deg_v``."""
    degs = dict(zip(p.variables, p.degrees()))
    used = [v for v in p.variables if degs[v] > 0]
    for v in used:
        if v not in assignment:
            raise UnknownVariableError(v)
    num_pows: Dict[str, List[Polynomial]] = {}
    den_pows: Dict[str, List[Polynomial]] = {}
    one = Polynomial.one(field, variables)
    for v in used:
        img = assignment[v]
        n, d = img.numerator, img.denominator
        ns, ds = [one], [one]
        for _ in range(degs[v]):
            ns.append(ns[-1] * n)
            ds.append(ds[-1] * d if not d.is_one() else one)
        num_pows[v], den_pows[v] = ns, ds
    positions = [(p.index(v), v) for v in used]
    factors: Dict[Tuple[str, int], Polynomial] = {}

    def factor(v: str, e: int) -> Polynomial:
        key = (v, e)
        if key not in factors:
            rest = degs[v] - e
            factors[key] = num_pows[v][e] * den_pows[v][rest] if rest else num_pows[v][e]
        return factors[key]

    def combine(terms: List[Tuple[Tuple[int, ...], Scalar]], k: int) -> Polynomial:
        # Group on one variable at a time so shared factors are multiplied once.
        if k == len(positions):
            return Polynomial.constant(field, variables, sum(c for _, c in terms))
        i, v = positions[k]
        groups: Dict[int, List[Tuple[Tuple[int, ...], Scalar]]] = {}
        for mono, c in terms:
            groups.setdefault(mono[i], []).append((mono, c))
        total = Polynomial.zero(field, variables)
        for e, group in groups.items():
            total = total + combine(group, k + 1) * factor(v, e)
        return total

    total = combine(list(p.terms.items()), 0) if p.terms else Polynomial.zero(field, variables)
    return total, {v: degs[v] for v in used if not assignment[v].denominator.is_one()}


def _denominator_power(
    exponents: Mapping[str, int],
    assignment: Mapping[str, RationalFunction],
    field: CoefficientField,
    variables: Tuple[str, ...],
) -> Polynomial:
    out = Polynomial.one(field, variables)
    for v, e in exponents.items():
        if e:
            out = out * assignment[v].denominator**e
    return out


def substitute(
    e: Union[Expression, Scalar],
    assignment: Mapping[str, Union[RationalFunction, Polynomial]],
) -> RationalFunction:
    """Simultaneously replace each variable ``v`` of ``e`` by ``assignment[v]``."""
    images = {v: RationalFunction.coerce(img) for v, img in assignment.items()}
    e = RationalFunction.coerce(e)
    field, variables = _target(images, e)
    num, num_exps = _evaluate_polynomial(e.numerator, images, field, variables)
    if e.is_polynomial():
        den, den_exps = Polynomial.constant(field, variables, e.denominator.constant_value()), {}
    else:
        den, den_exps = _evaluate_polynomial(e.denominator, images, field, variables)
    if den.is_zero():
        raise UndefinedSubstitutionError("denominator vanishes identically after substitution")
    # num/D^a divided by den/D^b: move the surplus denominator powers across.
    up = {v: den_exps.get(v, 0) - num_exps.get(v, 0) for v in set(num_exps) | set(den_exps)}
    num = num * _denominator_power({v: k for v, k in up.items() if k > 0}, images, field, variables)
    den = den * _denominator_power({v: -k for v, k in up.items() if k < 0}, images, field, variables)
    hints = _hints(images.values())
    return RationalFunction.from_parts(num, den, hints)


def _hints(images: Iterable[RationalFunction]) -> List[Polynomial]:
    seen: Dict[Polynomial, None] = {}
    for img in images:
        for part in (img.denominator, img.numerator):
            if not part.is_constant():
                seen.setdefault(part, None)
    return sorted(seen, key=lambda h: (h.degree(), len(h)))
