"""Multivariate polynomial gcd.

Content/primitive-part recursion on a main variable with the subresultant polynomial
remainder sequence. Rational inputs are cleared to integer primitive form first; prime
field inputs run the same sequence directly. Cheap exact shortcuts (divisibility,
monomial content, a modular coprimality screen) run before the remainder sequence.
"""

from __future__ import annotations

import random
from functools import reduce
from math import gcd as igcd
from typing import List, Optional, Sequence

from .fields import PRIME_FIELD, QQ, ZZ, CoefficientField
from .polynomial import Polynomial, _sub_exponents

SCREEN_PRIME = (1 << 61) - 1
# Prime fields smaller than this skip the modular screen (too few evaluation points).
MIN_SCREEN_FIELD = 1000


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Canonical gcd: integer-primitive with positive leading coefficient over QQ, monic over GF(p).

    ``gcd(0, 0) == 0``.
    """
    a._check(b)
    field = a.field
    if a.is_zero() and b.is_zero():
        return a
    if field == QQ:
        _, pa = a.to_integer_primitive()
        _, pb = b.to_integer_primitive()
        g = _gcd(pa, pb)
        return Polynomial._make(QQ, a.variables, dict(g.terms))
    return _gcd(a, b)


def canonical_associate(p: Polynomial) -> Polynomial:
    """The representative of ``p`` up to units used for gcds and denominators."""
    if p.is_zero():
        return p
    if p.field == QQ:
        _, prim = p.to_integer_primitive()
        return Polynomial._make(QQ, p.variables, dict(prim.terms))
    return _normal(p)


def _normal(p: Polynomial) -> Polynomial:
    if p.is_zero():
        return p
    lc = p.leading_coefficient()
    if p.field == ZZ:
        return -p if lc < 0 else p
    if p.field.is_field and lc != 1:
        return p.scale(p.field.inverse(lc))
    return p


def _one(like: Polynomial) -> Polynomial:
    return Polynomial.one(like.field, like.variables)


def _divide_monomial(p: Polynomial, mono) -> Polynomial:
    if not any(mono):
        return p
    return Polynomial._make(p.field, p.variables, {_sub_exponents(m, mono): c for m, c in p.terms.items()})


def _gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Gcd over ZZ or a prime field, normalized (positive lc / monic)."""
    if a.is_zero():
        return _normal(b)
    if b.is_zero():
        return _normal(a)
    field = a.field
    scale = 1
    if field == ZZ:
        ca, cb = a.integer_content(), b.integer_content()
        scale = igcd(ca, cb)
        if ca != 1:
            a = a.divexact(Polynomial.constant(ZZ, a.variables, ca))
        if cb != 1:
            b = b.divexact(Polynomial.constant(ZZ, b.variables, cb))
    if a.is_constant() or b.is_constant():
        return Polynomial.constant(field, a.variables, scale)
    ma, mb = a.monomial_content(), b.monomial_content()
    common = tuple(min(x, y) for x, y in zip(ma, mb))
    a = _divide_monomial(a, ma)
    b = _divide_monomial(b, mb)
    g = _gcd_primitive(a, b)
    return _normal(g.mul_term(common, scale))


def _content_in(p: Polynomial, name: str) -> Polynomial:
    return reduce(_gcd, p.coefficients_in(name).values())


def _gcd_primitive(a: Polynomial, b: Polynomial) -> Polynomial:
    if a.is_constant() or b.is_constant():
        return _one(a)
    small, large = (a, b) if len(a) <= len(b) else (b, a)
    if small.divides(large):
        return small
    if large.divides(small):
        return large
    da, db = a.degrees(), b.degrees()
    for name, x, y in zip(a.variables, da, db):
        if x > 0 and y == 0:
            return _gcd(_content_in(a, name), b)
        if y > 0 and x == 0:
            return _gcd(a, _content_in(b, name))
    shared = [name for name, x, y in zip(a.variables, da, db) if x > 0 and y > 0]
    free_of = _screen_free_variables(a, b, shared)
    if len(free_of) == len(shared):
        return _one(a)
    if free_of:
        name = free_of[0]
        return _gcd(_content_in(a, name), _content_in(b, name))
    name = min(shared, key=lambda v: max(a.degree(v), b.degree(v)))
    ca, cb = _content_in(a, name), _content_in(b, name)
    content = _gcd(ca, cb)
    pa = a.divexact(ca) if not ca.is_one() else a
    pb = b.divexact(cb) if not cb.is_one() else b
    g = subresultant_gcd(pa, pb, name)
    if g.degree(name) > 0:
        g = g.divexact(_content_in(g, name))
    else:
        g = _one(a)
    return g * content


def leading_coefficient_in(p: Polynomial, name: str) -> Polynomial:
    coeffs = p.coefficients_in(name)
    return coeffs[max(coeffs)]


def pseudo_remainder(a: Polynomial, b: Polynomial, name: str) -> Polynomial:
    """``lc(b)^(deg a - deg b + 1) * a`` reduced modulo ``b`` in ``name``."""
    db = b.degree(name)
    lcb = leading_coefficient_in(b, name)
    i = a.index(name)
    r = a
    e = a.degree(name) - db + 1
    while not r.is_zero() and r.degree(name) >= db:
        dr = r.degree(name)
        lcr = leading_coefficient_in(r, name)
        shift = tuple(dr - db if j == i else 0 for j in range(a.nvars))
        r = r * lcb - (b * lcr).mul_term(shift)
        e -= 1
    if e > 0:
        r = r * lcb**e
    return r


def subresultant_gcd(a: Polynomial, b: Polynomial, name: str) -> Polynomial:
    """Last nonzero element of the subresultant remainder sequence of ``a`` and ``b`` in ``name``."""
    if a.degree(name) < b.degree(name):
        a, b = b, a
    if b.is_zero():
        return a
    one = _one(a)
    g = one
    h = one
    while True:
        delta = a.degree(name) - b.degree(name)
        r = pseudo_remainder(a, b, name)
        if r.is_zero():
            return b
        if r.degree(name) == 0:
            return one
        a, b = b, r.divexact(g * h**delta)
        g = leading_coefficient_in(a, name)
        if delta == 1:
            h = g
        elif delta > 1:
            h = (g**delta).divexact(h ** (delta - 1))


# -- modular coprimality screen ---------------------------------------------


def _screen_modulus(field: CoefficientField) -> Optional[int]:
    if field == ZZ:
        return SCREEN_PRIME
    if field.kind == PRIME_FIELD and field.characteristic >= MIN_SCREEN_FIELD:
        return field.characteristic
    return None


def _specialize(p: Polynomial, keep: int, point: Sequence[int], q: int) -> List[int]:
    dense = [0] * (p.degree(p.variables[keep]) + 1)
    for mono, c in p.terms.items():
        value = c % q
        for j, e in enumerate(mono):
            if j != keep and e:
                value = value * pow(point[j], e, q) % q
        dense[mono[keep]] = (dense[mono[keep]] + value) % q
    return dense


def _univariate_gcd_degree(f: List[int], g: List[int], q: int) -> int:
    def trim(u: List[int]) -> List[int]:
        while u and u[-1] == 0:
            u.pop()
        return u

    f, g = trim(f[:]), trim(g[:])
    while g:
        inv = pow(g[-1], -1, q)
        while len(f) >= len(g):
            factor = f[-1] * inv % q
            shift = len(f) - len(g)
            for k, c in enumerate(g):
                f[k + shift] = (f[k + shift] - factor * c) % q
            trim(f)
            if not f:
                break
        f, g = g, f
    return len(f) - 1


def _screen_rng(a: Polynomial, b: Polynomial) -> random.Random:
    """Evaluation points drawn from a generator seeded by the inputs themselves."""
    return random.Random(f"{sorted(a.terms.items())}|{sorted(b.terms.items())}")


def _screen_free_variables(a: Polynomial, b: Polynomial, shared: Sequence[str]) -> List[str]:
    """Variables that provably do not occur in gcd(a, b).

    A specialization that keeps both leading coefficients nonzero cannot lower the
    degree of the gcd, so a constant image certifies that the variable is absent.
    """
    q = _screen_modulus(a.field)
    if q is None:
        return []
    rng = _screen_rng(a, b)
    free: List[str] = []
    for name in shared:
        keep = a.index(name)
        for _attempt in range(3):
            point = [rng.randrange(1, q) for _ in a.variables]
            fa = _specialize(a, keep, point, q)
            fb = _specialize(b, keep, point, q)
            if fa[-1] == 0 or fb[-1] == 0:
                continue
            if _univariate_gcd_degree(fa, fb, q) == 0:
                free.append(name)
            break
    return free
