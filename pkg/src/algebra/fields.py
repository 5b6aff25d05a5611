"""Coefficient domains: the rationals, prime fields and (internally) the integers."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Union

from ..errors import DivisionByZeroError, NonExactDivisionError, ReductionError

Coefficient = Union[int, Fraction]

RATIONALS = "rationals"
PRIME_FIELD = "prime-field"
INTEGERS = "integers"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for p in small:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # Deterministic Miller-Rabin witnesses for n < 3.3e24
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True, slots=True)
class CoefficientField:
    kind: str
    characteristic: int = 0

    def __post_init__(self) -> None:
        if self.kind == PRIME_FIELD:
            if not _is_prime(self.characteristic):
                raise ValueError(f"characteristic {self.characteristic} is not prime")
        elif self.kind in (RATIONALS, INTEGERS):
            if self.characteristic != 0:
                raise ValueError(f"{self.kind} have characteristic 0")
        else:
            raise ValueError(f"unknown coefficient field kind {self.kind!r}")

    @classmethod
    def rationals(cls) -> "CoefficientField":
        return QQ

    @classmethod
    def prime(cls, p: int) -> "CoefficientField":
        return cls(PRIME_FIELD, p)

    @classmethod
    def of_characteristic(cls, characteristic: int) -> "CoefficientField":
        return QQ if characteristic == 0 else cls.prime(characteristic)

    @property
    def is_field(self) -> bool:
        return self.kind != INTEGERS

    def __str__(self) -> str:
        if self.kind == PRIME_FIELD:
            return f"GF({self.characteristic})"
        return "QQ" if self.kind == RATIONALS else "ZZ"

    def normalize(self, c: Any) -> Coefficient:
        """Canonical representative of ``c`` (ints, Fractions)."""
        if self.kind == PRIME_FIELD:
            p = self.characteristic
            if type(c) is int:
                return c % p
            c = Fraction(c)
            den = c.denominator % p
            if den == 0:
                raise ReductionError(f"denominator of {c} vanishes modulo {p}")
            return c.numerator * pow(den, -1, p) % p
        if type(c) is int:
            return c
        if isinstance(c, Fraction):
            if c.denominator == 1:
                return c.numerator
            if self.kind == INTEGERS:
                raise NonExactDivisionError(f"{c} is not an integer")
            return c
        return self.normalize(Fraction(c))

    def div(self, a: Coefficient, b: Coefficient) -> Coefficient:
        if b == 0:
            raise DivisionByZeroError("division by zero coefficient")
        if self.kind == PRIME_FIELD:
            p = self.characteristic
            return a * pow(b, -1, p) % p
        if self.kind == INTEGERS:
            q, r = divmod(a, b)
            if r:
                raise NonExactDivisionError(f"{b} does not divide {a}")
            return q
        return self.normalize(Fraction(a) / b)

    def inverse(self, a: Coefficient) -> Coefficient:
        return self.div(1, a)

    def is_unit(self, a: Coefficient) -> bool:
        if self.kind == INTEGERS:
            return a in (1, -1)
        return a != 0


QQ = CoefficientField(RATIONALS, 0)
ZZ = CoefficientField(INTEGERS, 0)


def GF(p: int) -> CoefficientField:
    return CoefficientField.prime(p)
