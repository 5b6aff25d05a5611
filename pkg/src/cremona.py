"""Cremona transformations as tuples of rational functions."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from loguru import logger
from sympy import Matrix

from .algebra.fields import QQ, CoefficientField
from .algebra.gcd import canonical_associate, poly_gcd
from .algebra.polynomial import Polynomial
from .algebra.rational import Expression, RationalFunction, substitute
from .errors import ReductionError, UndefinedSubstitutionError, VariableMismatchError


@dataclass(frozen=True, slots=True)
class CremonaMap:
    """``variables[i] -> images[i]``; acts on expressions by simultaneous substitution."""

    variables: Tuple[str, ...]
    images: Tuple[RationalFunction, ...]

    def __post_init__(self) -> None:
        if len(self.variables) != len(self.images):
            raise VariableMismatchError(
                f"{len(self.images)} images for {len(self.variables)} variables"
            )
        if len(set(self.variables)) != len(self.variables):
            raise VariableMismatchError(f"repeated variable in {self.variables}")
        fields = {img.field for img in self.images}
        if len(fields) > 1:
            raise VariableMismatchError("images over different coefficient fields")
        for img in self.images:
            if img.variables != self.variables:
                raise VariableMismatchError(f"image in {img.variables}, map in {self.variables}")

    @classmethod
    def from_images(cls, variables: Sequence[str], images: Sequence[Expression]) -> "CremonaMap":
        variables = tuple(variables)
        rfs = tuple(RationalFunction.coerce(img).with_variables(variables) for img in images)
        return cls(variables, rfs)

    @classmethod
    def identity(cls, variables: Sequence[str], coefficients: CoefficientField = QQ) -> "CremonaMap":
        variables = tuple(variables)
        return cls(variables, tuple(RationalFunction.variable(coefficients, variables, v) for v in variables))

    @property
    def field(self) -> CoefficientField:
        return self.images[0].field

    def assignment(self) -> Dict[str, RationalFunction]:
        return dict(zip(self.variables, self.images))

    def image(self, name: str) -> RationalFunction:
        return self.images[self.variables.index(name)]


def pullback(m: CremonaMap, e: Expression) -> RationalFunction:
    """``e`` with every variable replaced by its image under ``m``."""
    rf = RationalFunction.coerce(e)
    if rf.variables != m.variables:
        rf = rf.with_variables(m.variables)
    return substitute(rf, m.assignment())


def compose(a: CremonaMap, b: CremonaMap) -> CremonaMap:
    """Map whose i-th image is ``b``'s i-th image pulled back by ``a``.

    ``pullback(compose(a, b), e) == pullback(a, pullback(b, e))``.
    """
    if a.variables != b.variables:
        raise VariableMismatchError(f"variables {a.variables} != {b.variables}")
    images = []
    for name, img in zip(b.variables, b.images):
        try:
            images.append(pullback(a, img))
        except UndefinedSubstitutionError as exc:
            raise UndefinedSubstitutionError(f"composition undefined at the image of {name}") from exc
    return CremonaMap(a.variables, tuple(images))


def is_identity(m: CremonaMap) -> bool:
    return all(
        img == RationalFunction.variable(img.field, m.variables, name)
        for name, img in zip(m.variables, m.images)
    )


def verify_involution(m: CremonaMap) -> bool:
    """True iff ``m`` has order exactly two."""
    if is_identity(m):
        return False
    return is_identity(compose(m, m))


# -- monomial actions ---------------------------------------------------------


@dataclass(slots=True)
class MonomialProfile:
    """Column ``j`` of ``matrix`` is the exponent vector of the image of generator ``j``."""

    matrix: List[List[int]]
    determinant: int
    constants: List[Fraction] = field(default_factory=list)

    def column(self, j: int) -> List[int]:
        return [row[j] for row in self.matrix]

    def to_dict(self) -> dict:
        return {
            "matrix": self.matrix,
            "determinant": self.determinant,
            "constants": [str(c) for c in self.constants],
        }


def _multiplicities(p: Polynomial, factors: Sequence[Polynomial]) -> Optional[List[int]]:
    """Exponents of ``factors`` in ``p``; None when ``p`` is not a unit times such a product."""
    counts = []
    for f in factors:
        k = 0
        while not p.is_constant():
            q = p.try_divexact(f)
            if q is None:
                break
            p, k = q, k + 1
        counts.append(k)
    return counts if p.is_constant() else None


def _exponent_vector(e: RationalFunction, factors: Sequence[Polynomial]) -> Optional[List[int]]:
    num = _multiplicities(e.numerator, factors)
    den = _multiplicities(e.denominator, factors)
    if num is None or den is None:
        return None
    return [a - b for a, b in zip(num, den)]


def _factor_basis(generators: Sequence[RationalFunction]) -> List[Polynomial]:
    """Pairwise coprime polynomials over which every generator splits.

    Shared factors are refined by gcd until no two basis elements have a common factor,
    which makes the multiplicity of each basis element in a product unique.
    """
    pending = [part for g in generators for part in (g.numerator, g.denominator)]
    basis: List[Polynomial] = []
    while pending:
        p = pending.pop()
        if p.is_constant():
            continue
        p = canonical_associate(p)
        for i, b in enumerate(basis):
            common = poly_gcd(p, b)
            if not common.is_constant():
                del basis[i]
                pending.extend([common, b.divexact(common), p.divexact(common)])
                break
        else:
            basis.append(p)
    return sorted(basis, key=lambda f: (-f.degree(), -len(f), sorted(f.terms)))


def _laurent_product(generators: Sequence[RationalFunction], exponents: Sequence[int]) -> RationalFunction:
    result = RationalFunction.constant(generators[0].field, generators[0].variables, 1)
    for g, e in zip(generators, exponents):
        if e:
            result = result * g**e
    return result


def monomial_profile(m: CremonaMap, generators: Sequence[Expression]) -> Optional[MonomialProfile]:
    """Exponent matrix of ``m`` acting on ``generators``, or None if some image is not monomial.

    Exponents are read off from factor multiplicities over a pairwise coprime
    refinement of the generators' numerator and denominator factors and then
    confirmed by exact equality.
    """
    gens = [RationalFunction.coerce(g).with_variables(m.variables) for g in generators]
    if not gens or any(g.is_zero() for g in gens):
        return None
    factors = _factor_basis(gens)
    if not factors:
        return None
    columns = []
    for g in gens:
        vec = _exponent_vector(g, factors)
        if vec is None:
            logger.debug("Generator does not split over the factor basis", generator=repr(g))
            return None
        columns.append(vec)
    basis = Matrix(columns).T
    exponents: List[List[int]] = []
    constants: List[Fraction] = []
    for g in gens:
        image = pullback(m, g)
        target = _exponent_vector(image, factors)
        if target is None:
            return None
        try:
            solution, params = basis.gauss_jordan_solve(Matrix(target))
        except ValueError:
            return None
        if params.shape[0] or any(not entry.is_integer for entry in solution):
            return None
        vec = [int(entry) for entry in solution]
        ratio = image / _laurent_product(gens, vec)
        if not ratio.is_constant():
            return None
        exponents.append(vec)
        constants.append(Fraction(ratio.as_polynomial().constant_value()))
    n = len(gens)
    matrix = [[exponents[j][i] for j in range(n)] for i in range(n)]
    det = Matrix(matrix).det()
    return MonomialProfile(matrix=matrix, determinant=int(det), constants=constants)


# -- reduction modulo p -------------------------------------------------------


def _reduce_image(img: RationalFunction, target: CoefficientField) -> RationalFunction:
    scale_n, num = img.numerator.to_integer_primitive()
    scale_d, den = img.denominator.to_integer_primitive()
    scale = scale_n / scale_d
    p = target.characteristic
    if scale.denominator % p == 0:
        raise ReductionError(f"coefficient {scale} has a denominator divisible by {p}")
    if scale.numerator % p == 0:
        raise ReductionError(f"image vanishes modulo {p}")
    num_p = num.change_field(target).scale(target.normalize(scale))
    den_p = den.change_field(target)
    if den_p.is_zero():
        raise ReductionError(f"denominator vanishes modulo {p}")
    return RationalFunction.from_parts(num_p, den_p)


def reduce_mod_p(m: CremonaMap, p: int) -> CremonaMap:
    """Coefficientwise reduction of integer-primitive numerator/denominator representatives."""
    if m.field != QQ:
        raise ReductionError(f"reduction needs a map over QQ, got {m.field}")
    target = CoefficientField.prime(p)
    images = tuple(_reduce_image(img, target) for img in m.images)
    logger.debug("Reduced map", prime=p)
    return CremonaMap(m.variables, images)


def map_from_mapping(variables: Sequence[str], images: Mapping[str, Expression]) -> CremonaMap:
    missing = [v for v in variables if v not in images]
    if missing:
        raise VariableMismatchError(f"no image for {', '.join(missing)}")
    return CremonaMap.from_images(variables, [images[v] for v in variables])


__all__ = [
    "CremonaMap",
    "MonomialProfile",
    "compose",
    "is_identity",
    "map_from_mapping",
    "monomial_profile",
    "pullback",
    "reduce_mod_p",
    "verify_involution",
]
