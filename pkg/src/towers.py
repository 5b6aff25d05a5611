"""Checks for the change-of-variables tower: generation, relations, invariance, descent."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from loguru import logger

from .algebra.fields import CoefficientField
from .algebra.gcd import canonical_associate
from .algebra.polynomial import Monomial, Polynomial, equal_up_to_unit_monomial
from .algebra.rational import Expression, RationalFunction, substitute
from .algebra.resultant import resultant
from .cremona import CremonaMap, pullback
from .errors import DegenerateEliminationError, DegreeError, VariableMismatchError


@dataclass(frozen=True, slots=True)
class ChangeOfVariables:
    """New generators written in old variables, optionally with the inverse."""

    name: str
    old: Tuple[str, ...]
    new: Tuple[str, ...]
    forward: Tuple[RationalFunction, ...]
    backward: Optional[Tuple[RationalFunction, ...]] = None

    def __post_init__(self) -> None:
        if len(self.forward) != len(self.new):
            raise VariableMismatchError(f"{self.name}: {len(self.forward)} expressions for {len(self.new)} generators")
        for expr in self.forward:
            if expr.variables != self.old:
                raise VariableMismatchError(f"{self.name}: forward expression not in {self.old}")
        if self.backward is not None:
            if len(self.backward) != len(self.old):
                raise VariableMismatchError(f"{self.name}: backward needs one expression per old variable")
            for expr in self.backward:
                if expr.variables != self.new:
                    raise VariableMismatchError(f"{self.name}: backward expression not in {self.new}")

    @property
    def field(self) -> CoefficientField:
        return self.forward[0].field

    def forward_assignment(self) -> Dict[str, RationalFunction]:
        return dict(zip(self.new, self.forward))

    def backward_assignment(self) -> Dict[str, RationalFunction]:
        if self.backward is None:
            raise VariableMismatchError(f"{self.name}: no backward expressions")
        return dict(zip(self.old, self.backward))

    def lift(self, e: Expression) -> RationalFunction:
        """Rewrite an expression in the new generators in terms of the old variables."""
        rf = RationalFunction.coerce(e)
        if rf.variables != self.new:
            rf = rf.with_variables(self.new)
        return substitute(rf, self.forward_assignment())

    @classmethod
    def identity(cls, variables: Sequence[str], coefficients: CoefficientField) -> "ChangeOfVariables":
        variables = tuple(variables)
        exprs = tuple(RationalFunction.variable(coefficients, variables, v) for v in variables)
        return cls("identity", variables, variables, exprs, exprs)


def chain(outer: ChangeOfVariables, inner: ChangeOfVariables) -> ChangeOfVariables:
    """``outer``'s generators written directly in ``inner``'s old variables."""
    if outer.old != inner.new:
        raise VariableMismatchError(f"cannot chain {outer.name} over {inner.name}")
    forward = tuple(inner.lift(f) for f in outer.forward)
    backward = None
    if outer.backward is not None and inner.backward is not None:
        outer_back = outer.backward_assignment()
        backward = tuple(substitute(b, outer_back) for b in inner.backward)
    return ChangeOfVariables(f"{outer.name}/{inner.name}", inner.old, outer.new, forward, backward)


@dataclass(frozen=True, slots=True)
class Relation:
    name: str
    polynomial: Polynomial

    @property
    def variables(self) -> Tuple[str, ...]:
        return self.polynomial.variables


@dataclass(frozen=True, slots=True)
class QuadraticRoot:
    """A symbol ``t`` with ``t^2 = trace*t - norm``."""

    name: str
    trace: Polynomial
    norm: Polynomial


@dataclass(frozen=True, slots=True)
class QuadraticDescentWitness:
    t: RationalFunction
    sigma_t: RationalFunction
    invariants: Mapping[str, RationalFunction]
    trace: RationalFunction
    norm: RationalFunction


@dataclass(slots=True)
class Outcome:
    """Verdict of one check with whatever it computed along the way."""

    passed: bool
    residue: Optional[Expression] = None
    detail: Dict[str, object] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed


def _difference(lhs: RationalFunction, rhs: RationalFunction) -> Optional[RationalFunction]:
    """None when equal, else ``lhs - rhs``."""
    if lhs == rhs:
        return None
    return lhs - rhs


# -- generation and relations ---------------------------------------------------


def check_generation(c: ChangeOfVariables) -> Outcome:
    if c.backward is None:
        raise VariableMismatchError(f"{c.name}: generation needs backward expressions")
    forward = c.forward_assignment()
    for name, back in zip(c.old, c.backward):
        roundtrip = substitute(back, forward)
        residue = _difference(roundtrip, RationalFunction.variable(c.field, c.old, name))
        if residue is not None:
            return Outcome(False, residue, {"variable": name})
    return Outcome(True)


def verify_generation(c: ChangeOfVariables) -> bool:
    """True iff the backward expressions undo the forward ones exactly."""
    return check_generation(c).passed


def check_relation(r: Relation, c: ChangeOfVariables) -> Outcome:
    poly = r.polynomial.with_variables(c.new)
    if poly.is_zero():
        return Outcome(False, None, {"reason": "zero relation"})
    value = substitute(poly, c.forward_assignment())
    if value.is_zero():
        return Outcome(True)
    return Outcome(False, value.numerator)


def verify_relation(r: Relation, c: ChangeOfVariables) -> bool:
    return check_relation(r, c).passed


def reduce_quadratic(p: Polynomial, root: QuadraticRoot) -> Tuple[Polynomial, Polynomial]:
    """Write ``p`` as ``a + b*t`` modulo ``t^2 - trace*t + norm``; a and b are free of t."""
    t = root.name
    trace = root.trace.with_variables(p.variables)
    norm = root.norm.with_variables(p.variables)
    i = p.index(t)
    coeffs = p.coefficients_in(t)
    while coeffs and max(coeffs) >= 2:
        k = max(coeffs)
        ck = coeffs.pop(k)
        # c t^k = c t^(k-2) (trace t - norm)
        for degree, part in ((k - 1, ck * trace), (k - 2, -(ck * norm))):
            if part.is_zero():
                continue
            merged = coeffs.get(degree, Polynomial.zero(p.field, p.variables)) + part
            if merged.is_zero():
                coeffs.pop(degree, None)
            else:
                coeffs[degree] = merged
    zero = Polynomial.zero(p.field, p.variables)
    low, high = coeffs.get(0, zero), coeffs.get(1, zero)
    for part in (low, high):
        if any(m[i] for m in part.terms):
            raise DegreeError(f"trace or norm of {t} mentions {t}")
    return low, high


def check_transport(
    r_old: Relation,
    rewrite: Mapping[str, Expression],
    r_new: Relation,
    root: Optional[QuadraticRoot] = None,
) -> Outcome:
    image = substitute(r_old.polynomial, rewrite)
    numerator = image.numerator
    if root is not None:
        numerator, linear = reduce_quadratic(numerator, root)
        if not linear.is_zero():
            return Outcome(False, linear, {"reason": f"part linear in {root.name} survives"})
        numerator = numerator.with_variables(r_new.variables)
    elif numerator.variables != r_new.variables:
        numerator = numerator.with_variables(r_new.variables)
    if numerator.is_zero():
        return Outcome(False, None, {"reason": "relation collapses to zero"})
    cofactor = equal_up_to_unit_monomial(numerator, r_new.polynomial)
    if cofactor is None:
        return Outcome(False, numerator)
    return Outcome(True, None, {"constant": cofactor[0], "monomial": cofactor[1]})


def transport_relation(
    r_old: Relation,
    rewrite: Mapping[str, Expression],
    r_new: Relation,
    root: Optional[QuadraticRoot] = None,
) -> Optional[Tuple[object, Monomial]]:
    """Cofactor ``(c, m)`` with ``numerator(r_old after rewrite) == c * m * r_new``, or None."""
    outcome = check_transport(r_old, rewrite, r_new, root)
    if not outcome.passed:
        return None
    return outcome.detail["constant"], outcome.detail["monomial"]


# -- elimination ----------------------------------------------------------------


def _strip(p: Polynomial) -> Polynomial:
    mono = p.monomial_content()
    if any(mono):
        p = Polynomial._make(p.field, p.variables, {tuple(a - b for a, b in zip(m, mono)): c for m, c in p.terms.items()})
    return canonical_associate(p)


def _eliminate_one(polys: List[Polynomial], name: str) -> List[Polynomial]:
    free = [p for p in polys if p.degree(name) <= 0]
    involved = sorted((p for p in polys if p.degree(name) > 0), key=lambda p: (p.degree(name), len(p)))
    if len(involved) < 2:
        return free
    for pivot in involved:
        produced = []
        for other in involved:
            if other is pivot:
                continue
            res = resultant(pivot, other, name)
            if not res.is_zero():
                produced.append(_strip(res))
        if produced:
            logger.debug("Eliminated variable", variable=name, pivot_terms=len(pivot), produced=len(produced))
            return free + produced
    return free


def eliminate(parametrization: ChangeOfVariables, order: Optional[Sequence[str]] = None) -> Polynomial:
    """A nonzero polynomial in the new generators vanishing on the parametrization.

    Old variables are removed by iterated resultants, last-listed first unless an
    explicit ``order`` is given.
    """
    c = parametrization
    clash = set(c.old) & set(c.new)
    if clash:
        raise VariableMismatchError(f"old and new generators overlap: {sorted(clash)}")
    ambient = c.old + c.new
    polys = []
    for gen, expr in zip(c.new, c.forward):
        num = expr.numerator.with_variables(ambient)
        den = expr.denominator.with_variables(ambient)
        polys.append(den * Polynomial.variable(c.field, ambient, gen) - num)
    steps = list(order) if order is not None else list(reversed(c.old))
    for name in steps:
        polys = _eliminate_one(polys, name)
    survivors = [p for p in polys if not p.is_zero() and all(p.degree(v) <= 0 for v in c.old)]
    if not survivors:
        raise DegenerateEliminationError(f"{c.name}: every elimination route collapsed")
    best = min(survivors, key=lambda p: (p.degree(), len(p)))
    return best.with_variables(c.new)


def solve_linear_variable(r: Relation, name: str) -> RationalFunction:
    """``e`` free of ``name`` with ``r(name = e) == 0``."""
    poly = r.polynomial
    degree = poly.degree(name)
    if degree != 1:
        raise DegreeError(f"{r.name} has degree {degree} in {name}")
    coeffs = poly.coefficients_in(name)
    lead = coeffs.get(1)
    if lead is None or lead.is_zero():
        raise DegreeError(f"leading coefficient of {r.name} in {name} vanishes")
    rest = coeffs.get(0, Polynomial.zero(poly.field, poly.variables))
    return RationalFunction.from_parts(-rest, lead)


def check_solution(r: Relation, name: str, solution: RationalFunction) -> Outcome:
    variables = r.polynomial.variables
    assignment = {v: RationalFunction.variable(r.polynomial.field, variables, v) for v in variables}
    assignment[name] = solution.with_variables(variables)
    value = substitute(r.polynomial, assignment)
    if value.is_zero():
        return Outcome(True)
    return Outcome(False, value.numerator)


# -- invariance and descent -------------------------------------------------------


def check_invariance(m: CremonaMap, e: Expression) -> Outcome:
    rf = RationalFunction.coerce(e).with_variables(m.variables)
    residue = _difference(pullback(m, rf), rf)
    return Outcome(residue is None, residue)


def verify_invariance(m: CremonaMap, e: Expression) -> bool:
    return check_invariance(m, e).passed


def check_quadratic_descent(w: QuadraticDescentWitness, m: CremonaMap) -> Outcome:
    t = w.t.with_variables(m.variables)
    sigma_t = w.sigma_t.with_variables(m.variables)
    image = pullback(m, t)
    residue = _difference(image, sigma_t)
    if residue is not None:
        return Outcome(False, residue, {"failed": "image of t"})
    if sigma_t == t:
        return Outcome(False, None, {"failed": "t is fixed"})
    residue = _difference(pullback(m, sigma_t), t)
    if residue is not None:
        return Outcome(False, residue, {"failed": "order two on t"})
    invariants = {}
    for name, inv in w.invariants.items():
        inv = inv.with_variables(m.variables)
        residue = _difference(pullback(m, inv), inv)
        if residue is not None:
            return Outcome(False, residue, {"failed": f"invariant {name}"})
        invariants[name] = inv
    trace = substitute(w.trace, invariants)
    residue = _difference(t + sigma_t, trace)
    if residue is not None:
        return Outcome(False, residue, {"failed": "trace"})
    norm = substitute(w.norm, invariants)
    residue = _difference(t * sigma_t, norm)
    if residue is not None:
        return Outcome(False, residue, {"failed": "norm"})
    return Outcome(True)


def verify_quadratic_descent(w: QuadraticDescentWitness, m: CremonaMap) -> bool:
    """t is moved, has order two, and its trace and norm lie in the claimed invariants."""
    return check_quadratic_descent(w, m).passed


def check_singular_substitution(
    h: Relation,
    locus: Mapping[str, Expression],
    distinguished: Optional[Sequence[str]] = None,
) -> Outcome:
    poly = h.polynomial
    variables = poly.variables
    assignment = {v: RationalFunction.variable(poly.field, variables, v) for v in variables}
    for name, expr in locus.items():
        assignment[name] = RationalFunction.coerce(expr).with_variables(variables)
    required = list(distinguished) if distinguished is not None else list(locus)
    informational: Dict[str, bool] = {}
    value = substitute(poly, assignment)
    if not value.is_zero():
        return Outcome(False, value.numerator, {"failed": h.name})
    for name in variables:
        partial = substitute(poly.derivative(name), assignment)
        if name in required:
            if not partial.is_zero():
                return Outcome(False, partial.numerator, {"failed": f"d/d{name}"})
        elif poly.degree(name) > 0:
            informational[name] = partial.is_zero()
    return Outcome(True, None, {"other_partials_vanish": informational} if informational else {})


def verify_singular_substitution(
    h: Relation,
    locus: Mapping[str, Expression],
    distinguished: Optional[Sequence[str]] = None,
) -> bool:
    """h and its partials in the distinguished variables vanish on the locus."""
    return check_singular_substitution(h, locus, distinguished).passed


def check_induced_action(m: CremonaMap, system: ChangeOfVariables, induced: Mapping[str, Expression]) -> Outcome:
    if system.old != m.variables:
        raise VariableMismatchError(f"{system.name} is not written in {m.variables}")
    for gen, forward in zip(system.new, system.forward):
        if gen not in induced:
            continue
        expected = system.lift(induced[gen])
        residue = _difference(pullback(m, forward), expected)
        if residue is not None:
            return Outcome(False, residue, {"generator": gen})
    return Outcome(True)


def verify_induced_action(m: CremonaMap, system: ChangeOfVariables, induced: Mapping[str, Expression]) -> bool:
    """The map acts on each generator as the claimed expression in the generators."""
    return check_induced_action(m, system, induced).passed


def check_identity(lhs: Expression, rhs: Expression) -> Outcome:
    a, b = RationalFunction.coerce(lhs), RationalFunction.coerce(rhs)
    if a.variables != b.variables:
        b = b.with_variables(a.variables)
    residue = _difference(a, b)
    return Outcome(residue is None, residue)


def verify_identity(lhs: Expression, rhs: Expression) -> bool:
    return check_identity(lhs, rhs).passed
