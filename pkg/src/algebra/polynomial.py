"""Sparse multivariate polynomials over an exact coefficient field.

Terms are stored as ``{exponent tuple: nonzero coefficient}``. The monomial order is
lexicographic on the ambient variable list (first variable most significant), which
is exactly Python's tuple ordering on exponent vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd as igcd
from typing import Dict, Iterable, Iterator, Mapping, Optional, Sequence, Tuple, Union

from ..errors import (
    DivisionByZeroError,
    NonExactDivisionError,
    UnknownVariableError,
    VariableMismatchError,
)
from .fields import QQ, ZZ, Coefficient, CoefficientField

Monomial = Tuple[int, ...]
Scalar = Union[int, Fraction]


def _add_exponents(m1: Monomial, m2: Monomial) -> Monomial:
    return tuple([a + b for a, b in zip(m1, m2)])


def _divides(m1: Monomial, m2: Monomial) -> bool:
    return all(a <= b for a, b in zip(m1, m2))


def _sub_exponents(m1: Monomial, m2: Monomial) -> Monomial:
    return tuple([a - b for a, b in zip(m1, m2)])


@dataclass(frozen=True, slots=True, eq=False)
class Polynomial:
    field: CoefficientField
    variables: Tuple[str, ...]
    terms: Mapping[Monomial, Coefficient]

    @classmethod
    def _make(cls, field: CoefficientField, variables: Tuple[str, ...], terms: Dict[Monomial, Coefficient]) -> "Polynomial":
        obj = object.__new__(cls)
        object.__setattr__(obj, "field", field)
        object.__setattr__(obj, "variables", variables)
        object.__setattr__(obj, "terms", terms)
        return obj

    @classmethod
    def from_terms(
        cls,
        field: CoefficientField,
        variables: Sequence[str],
        terms: Mapping[Monomial, Scalar],
    ) -> "Polynomial":
        variables = tuple(variables)
        n = len(variables)
        clean: Dict[Monomial, Coefficient] = {}
        for mono, coeff in terms.items():
            mono = tuple(mono)
            if len(mono) != n or any(e < 0 for e in mono):
                raise ValueError(f"bad exponent vector {mono} for variables {variables}")
            value = field.normalize(clean.get(mono, 0) + field.normalize(coeff))
            if value:
                clean[mono] = value
            else:
                clean.pop(mono, None)
        return cls._make(field, variables, clean)

    @classmethod
    def zero(cls, field: CoefficientField, variables: Sequence[str]) -> "Polynomial":
        return cls._make(field, tuple(variables), {})

    @classmethod
    def constant(cls, field: CoefficientField, variables: Sequence[str], value: Scalar) -> "Polynomial":
        variables = tuple(variables)
        value = field.normalize(value)
        if not value:
            return cls._make(field, variables, {})
        return cls._make(field, variables, {(0,) * len(variables): value})

    @classmethod
    def one(cls, field: CoefficientField, variables: Sequence[str]) -> "Polynomial":
        return cls.constant(field, variables, 1)

    @classmethod
    def variable(cls, field: CoefficientField, variables: Sequence[str], name: str) -> "Polynomial":
        variables = tuple(variables)
        if name not in variables:
            raise UnknownVariableError(name)
        mono = tuple(1 if v == name else 0 for v in variables)
        return cls._make(field, variables, {mono: 1})

    @classmethod
    def monomial(
        cls,
        field: CoefficientField,
        variables: Sequence[str],
        exponents: Monomial,
        coeff: Scalar = 1,
    ) -> "Polynomial":
        return cls.from_terms(field, variables, {tuple(exponents): coeff})

    # -- inspection -------------------------------------------------------

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def is_one(self) -> bool:
        return self.is_constant() and self.constant_value() == 1

    def constant_value(self) -> Coefficient:
        return self.terms.get((0,) * self.nvars, 0)

    def index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise UnknownVariableError(name) from None

    def degree(self, name: Optional[str] = None) -> int:
        """Degree in ``name`` (total degree when omitted); -1 for the zero polynomial."""
        if not self.terms:
            return -1
        if name is None:
            return max(sum(m) for m in self.terms)
        i = self.index(name)
        return max(m[i] for m in self.terms)

    def degrees(self) -> Tuple[int, ...]:
        if not self.terms:
            return (0,) * self.nvars
        return tuple(max(col) for col in zip(*self.terms))

    def used_variables(self) -> Tuple[str, ...]:
        degs = self.degrees()
        return tuple(v for v, d in zip(self.variables, degs) if d > 0)

    def leading_monomial(self) -> Monomial:
        if not self.terms:
            raise DivisionByZeroError("zero polynomial has no leading term")
        return max(self.terms)

    def leading_coefficient(self) -> Coefficient:
        if not self.terms:
            return 0
        return self.terms[max(self.terms)]

    def monomial_content(self) -> Monomial:
        """Largest monomial dividing every term."""
        if not self.terms:
            return (0,) * self.nvars
        return tuple(min(col) for col in zip(*self.terms))

    def sorted_terms(self) -> Iterator[Tuple[Monomial, Coefficient]]:
        for mono in sorted(self.terms, reverse=True):
            yield mono, self.terms[mono]

    def __len__(self) -> int:
        return len(self.terms)

    # -- equality ---------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Polynomial):
            return (
                self.field == other.field
                and self.variables == other.variables
                and dict(self.terms) == dict(other.terms)
            )
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == self.field.normalize(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field, self.variables, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        from ..utils.formatting import format_polynomial

        return f"Polynomial({format_polynomial(self)!r}, {self.field})"

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: "Polynomial") -> None:
        if self.variables != other.variables:
            raise VariableMismatchError(f"variables {self.variables} != {other.variables}")
        if self.field != other.field:
            raise VariableMismatchError(f"fields {self.field} != {other.field}")

    def _coerce(self, other: Union["Polynomial", Scalar]) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.field, self.variables, other)
        raise TypeError(f"cannot combine Polynomial with {type(other).__name__}")

    def __add__(self, other: Union["Polynomial", Scalar]) -> "Polynomial":
        other = self._coerce(other)
        norm = self.field.normalize
        acc = dict(self.terms)
        for mono, c in other.terms.items():
            value = norm(acc.get(mono, 0) + c)
            if value:
                acc[mono] = value
            else:
                acc.pop(mono, None)
        return Polynomial._make(self.field, self.variables, acc)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        norm = self.field.normalize
        return Polynomial._make(self.field, self.variables, {m: norm(-c) for m, c in self.terms.items()})

    def __sub__(self, other: Union["Polynomial", Scalar]) -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Scalar) -> "Polynomial":
        return self._coerce(other) - self

    def scale(self, c: Scalar) -> "Polynomial":
        c = self.field.normalize(c)
        if not c:
            return Polynomial.zero(self.field, self.variables)
        if c == 1:
            return self
        norm = self.field.normalize
        return Polynomial._make(self.field, self.variables, {m: norm(v * c) for m, v in self.terms.items()})

    def mul_term(self, mono: Monomial, c: Scalar = 1) -> "Polynomial":
        c = self.field.normalize(c)
        if not c:
            return Polynomial.zero(self.field, self.variables)
        norm = self.field.normalize
        return Polynomial._make(
            self.field,
            self.variables,
            {_add_exponents(m, mono): norm(v * c) for m, v in self.terms.items()},
        )

    def __mul__(self, other: Union["Polynomial", Scalar]) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if len(self.terms) < len(other.terms):
            small, big = self, other
        else:
            small, big = other, self
        if not small.terms:
            return Polynomial.zero(self.field, self.variables)
        acc: Dict[Monomial, Coefficient] = {}
        get = acc.get
        for m1, c1 in small.terms.items():
            for m2, c2 in big.terms.items():
                mono = tuple([a + b for a, b in zip(m1, m2)])
                acc[mono] = get(mono, 0) + c1 * c2
        norm = self.field.normalize
        clean = {}
        for mono, c in acc.items():
            c = norm(c)
            if c:
                clean[mono] = c
        return Polynomial._make(self.field, self.variables, clean)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial exponent must be a nonnegative integer")
        result = Polynomial.one(self.field, self.variables)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- division ---------------------------------------------------------

    def divexact(self, divisor: "Polynomial") -> "Polynomial":
        """Exact quotient; raises ``NonExactDivisionError`` when ``divisor`` does not divide."""
        quotient = self.try_divexact(divisor)
        if quotient is None:
            raise NonExactDivisionError("divisor does not divide the dividend exactly")
        return quotient

    def try_divexact(self, divisor: "Polynomial") -> Optional["Polynomial"]:
        self._check(divisor)
        if divisor.is_zero():
            raise DivisionByZeroError("division by the zero polynomial")
        if self.is_zero():
            return self
        field = self.field
        norm = field.normalize
        if divisor.is_constant():
            c = divisor.constant_value()
            try:
                return Polynomial._make(
                    field, self.variables, {m: field.div(v, c) for m, v in self.terms.items()}
                )
            except NonExactDivisionError:
                return None
        lm_b = divisor.leading_monomial()
        lc_b = divisor.terms[lm_b]
        # Cheap necessary conditions before the long division.
        degs_a, degs_b = self.degrees(), divisor.degrees()
        if any(db > da for da, db in zip(degs_a, degs_b)):
            return None
        rest = [(m, c) for m, c in divisor.terms.items() if m != lm_b]
        remainder: Dict[Monomial, Coefficient] = dict(self.terms)
        quotient: Dict[Monomial, Coefficient] = {}
        while remainder:
            lm = max(remainder)
            if not _divides(lm_b, lm):
                return None
            try:
                qc = field.div(remainder.pop(lm), lc_b)
            except NonExactDivisionError:
                return None
            qm = _sub_exponents(lm, lm_b)
            quotient[qm] = qc
            for m, c in rest:
                mono = tuple([a + b for a, b in zip(m, qm)])
                value = norm(remainder.get(mono, 0) - qc * c)
                if value:
                    remainder[mono] = value
                else:
                    remainder.pop(mono, None)
        return Polynomial._make(field, self.variables, quotient)

    def divides(self, other: "Polynomial") -> bool:
        return other.try_divexact(self) is not None

    # -- structure --------------------------------------------------------

    def derivative(self, name: str) -> "Polynomial":
        i = self.index(name)
        norm = self.field.normalize
        acc: Dict[Monomial, Coefficient] = {}
        for mono, c in self.terms.items():
            e = mono[i]
            if e == 0:
                continue
            value = norm(c * e)
            if value:
                new = list(mono)
                new[i] = e - 1
                acc[tuple(new)] = value
        return Polynomial._make(self.field, self.variables, acc)

    def coefficients_in(self, name: str) -> Dict[int, "Polynomial"]:
        """Split into ``{degree: coefficient}`` with coefficients free of ``name``."""
        i = self.index(name)
        buckets: Dict[int, Dict[Monomial, Coefficient]] = {}
        for mono, c in self.terms.items():
            e = mono[i]
            stripped = mono[:i] + (0,) + mono[i + 1 :]
            buckets.setdefault(e, {})[stripped] = c
        return {e: Polynomial._make(self.field, self.variables, t) for e, t in buckets.items()}

    @classmethod
    def from_coefficients(cls, name: str, coeffs: Mapping[int, "Polynomial"], like: "Polynomial") -> "Polynomial":
        i = like.index(name)
        acc: Dict[Monomial, Coefficient] = {}
        for e, poly in coeffs.items():
            for mono, c in poly.terms.items():
                new = mono[:i] + (mono[i] + e,) + mono[i + 1 :]
                acc[new] = c
        return cls._make(like.field, like.variables, acc)

    def with_variables(self, variables: Sequence[str]) -> "Polynomial":
        """Re-embed into another ambient list that contains every used variable."""
        variables = tuple(variables)
        if variables == self.variables:
            return self
        positions = []
        degs = self.degrees()
        for v, d in zip(self.variables, degs):
            if v in variables:
                positions.append(variables.index(v))
            elif d > 0:
                raise VariableMismatchError(f"variable {v} is used but missing from {variables}")
            else:
                positions.append(None)
        n = len(variables)
        acc: Dict[Monomial, Coefficient] = {}
        for mono, c in self.terms.items():
            new = [0] * n
            for e, pos in zip(mono, positions):
                if pos is not None:
                    new[pos] = e
            acc[tuple(new)] = c
        return Polynomial._make(self.field, variables, acc)

    def change_field(self, field: CoefficientField) -> "Polynomial":
        return Polynomial.from_terms(field, self.variables, self.terms)

    def integer_content(self) -> int:
        """Gcd of the numerators of all coefficients (rationals and integers only)."""
        return reduce(igcd, (Fraction(c).numerator for c in self.terms.values()), 0)

    def denominator_lcm(self) -> int:
        lcm = 1
        for c in self.terms.values():
            d = Fraction(c).denominator
            lcm = lcm * d // igcd(lcm, d)
        return lcm

    def to_integer_primitive(self) -> Tuple[Fraction, "Polynomial"]:
        """Write a rational polynomial as ``scale * p`` with ``p`` over ZZ, primitive, positive lc."""
        if self.is_zero():
            return Fraction(1), Polynomial.zero(ZZ, self.variables)
        den = self.denominator_lcm()
        cleared = {m: Fraction(c) * den for m, c in self.terms.items()}
        content = reduce(igcd, (int(c) for c in cleared.values()), 0)
        if cleared[max(cleared)] < 0:
            content = -content
        prim = {m: int(c) // content for m, c in cleared.items()}
        return Fraction(content, den), Polynomial._make(ZZ, self.variables, prim)

    def substitute_constants(self, values: Mapping[str, Scalar]) -> "Polynomial":
        """Specialize some variables to field constants, keeping the ambient list."""
        idx = [(self.index(v), self.field.normalize(c)) for v, c in values.items()]
        norm = self.field.normalize
        acc: Dict[Monomial, Coefficient] = {}
        for mono, c in self.terms.items():
            value = c
            new = list(mono)
            for i, x in idx:
                if new[i]:
                    value = value * x ** new[i]
                    new[i] = 0
            key = tuple(new)
            acc[key] = norm(acc.get(key, 0) + value)
        return Polynomial._make(self.field, self.variables, {m: c for m, c in acc.items() if c})


def poly_arith(op: str, a: Polynomial, b: Union[Polynomial, int, None] = None) -> Polynomial:
    """Dispatch ``add``/``sub``/``mul``/``neg``/``pow``."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "pow":
        if not isinstance(b, int):
            raise TypeError("pow needs an integer exponent")
        return a**b
    raise ValueError(f"unknown polynomial operation {op!r}")


def poly_divexact(a: Polynomial, b: Polynomial) -> Polynomial:
    return a.divexact(b)


def partial_derivative(p: Polynomial, name: str) -> Polynomial:
    return p.derivative(name)


def equal_up_to_unit_monomial(a: Polynomial, b: Polynomial) -> Optional[Tuple[Coefficient, Monomial]]:
    """Return ``(c, m)`` with ``a == c * m * b`` or ``None``."""
    a._check(b)
    if a.is_zero() or b.is_zero():
        raise DivisionByZeroError("equal_up_to_unit_monomial needs nonzero inputs")
    if len(a.terms) != len(b.terms):
        return None
    lm_a, lm_b = a.leading_monomial(), b.leading_monomial()
    mono = _sub_exponents(lm_a, lm_b)
    if any(e < 0 for e in mono):
        return None
    c = a.field.div(a.terms[lm_a], b.terms[lm_b]) if a.field.is_field else Fraction(a.terms[lm_a], b.terms[lm_b])
    if b.mul_term(mono, c) == a:
        return c, mono
    return None


def monomial_power(variables: Sequence[str], exponents: Iterable[int], field: CoefficientField = QQ) -> Polynomial:
    return Polynomial.monomial(field, variables, tuple(exponents))
