"""Runs scenario steps, the erratum comparison and the aggregate verification."""

from __future__ import annotations

import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from loguru import logger

from .algebra.evaluation import random_screen
from .algebra.fields import Coefficient
from .algebra.polynomial import Polynomial
from .algebra.rational import RationalFunction
from .config import settings
from .cremona import compose, is_identity, monomial_profile, pullback, reduce_mod_p
from .errors import AlgebraError, ScenarioError
from .properties import run_properties
from .report import PropertyResult, ScenarioResult, StepRecord, VerificationReport
from .scenarios import Scenario, ScenarioSpec, StepSpec, find_scenario, list_scenarios, load_scenario
from .towers import (
    Outcome,
    QuadraticDescentWitness,
    QuadraticRoot,
    check_generation,
    check_identity,
    check_induced_action,
    check_invariance,
    check_quadratic_descent,
    check_relation,
    check_singular_substitution,
    check_solution,
    check_transport,
    eliminate,
    solve_linear_variable,
)
from .utils.formatting import format_expression, format_monomial

SECTIONS = ("sec2", "sec3-char2", "sec3-char3", "sec4", "sec5")
RELATION_KEYS = ("relation", "from", "to", "divisor")


class StepContext:
    """What a step handler needs besides its own arguments."""

    def __init__(self, scenario: Scenario, step: StepSpec, rng: random.Random) -> None:
        self.scenario = scenario
        self.step = step
        self.rng = rng

    def arg(self, key: str, default: Any = ...) -> Any:
        if key in self.step.args:
            return self.step.args[key]
        if default is ...:
            raise ScenarioError(f"missing argument {key!r}", f"steps.{self.step.id}.args.{key}")
        return default

    def where(self, key: str) -> str:
        return f"steps.{self.step.id}.args.{key}"

    def parse(self, key: str, text: str, system: str) -> RationalFunction:
        return self.scenario.parse(text, system, self.where(key))


def _render(expr: Any) -> str:
    if isinstance(expr, (Polynomial, RationalFunction)):
        return format_expression(expr, settings.residue_terms)
    return str(expr)


def _outcome_record(outcome: Outcome, witness: Optional[Dict[str, Any]] = None) -> Tuple[bool, Any, str]:
    data: Dict[str, Any] = dict(witness or {})
    for key, value in outcome.detail.items():
        if key in ("constant", "monomial"):
            continue
        data[key] = value if isinstance(value, (str, int, bool, dict)) else _render(value)
    message = ""
    if not outcome.passed:
        if outcome.residue is not None:
            data["residue"] = _render(outcome.residue)
        else:
            message = str(outcome.detail.get("reason") or outcome.detail.get("failed") or "check failed")
    return outcome.passed, data or None, message


def _cross_check(ctx: StepContext, lhs: RationalFunction, rhs: RationalFunction, exact: Outcome) -> Outcome:
    """Exact verdicts must agree with a random screen at the configured prime."""
    if lhs.variables != rhs.variables:
        rhs = rhs.with_variables(lhs.variables)
    screened = random_screen(lhs, rhs, settings.screen_points, settings.screen_prime, ctx.rng)
    if exact.passed and not screened:
        return Outcome(False, exact.residue, {"reason": "random screen disagrees with exact equality"})
    return exact


# -- step handlers ----------------------------------------------------------------


def _step_involution(ctx: StepContext) -> Tuple[bool, Any, str]:
    m = ctx.scenario.map(ctx.arg("map"))
    if is_identity(m):
        return False, None, "map is the identity"
    square = compose(m, m)
    for name, img in zip(square.variables, square.images):
        expected = RationalFunction.variable(img.field, square.variables, name)
        if img != expected:
            return False, {"variable": name, "residue": _render(img - expected)}, ""
    return True, {"order": 2}, ""


def _step_reduction(ctx: StepContext) -> Tuple[bool, Any, str]:
    scenario = ctx.scenario
    m = scenario.map(ctx.arg("map"))
    reduced = reduce_mod_p(scenario.reference_map(), scenario.field.characteristic)
    for name, got, want in zip(m.variables, reduced.images, m.images):
        if got != want:
            return False, {"variable": name, "reduced": _render(got), "residue": _render(got - want)}, ""
    return True, {"prime": scenario.field.characteristic}, ""


def _step_action(ctx: StepContext) -> Tuple[bool, Any, str]:
    scenario = ctx.scenario
    map_name = ctx.arg("map")
    m = scenario.map(map_name)
    target = scenario.map_system(map_name)
    system = ctx.arg("in", target)
    expr = scenario.lift(ctx.parse("expr", ctx.arg("expr"), system), system, target)
    image = scenario.lift(ctx.parse("image", ctx.arg("image"), system), system, target)
    moved = pullback(m, expr)
    outcome = _cross_check(ctx, moved, image, check_identity(moved, image))
    return _outcome_record(outcome)


def _step_induced_action(ctx: StepContext) -> Tuple[bool, Any, str]:
    scenario = ctx.scenario
    map_name = ctx.arg("map")
    system = ctx.arg("system")
    chained = scenario.chain_to(system, scenario.map_system(map_name))
    images = {gen: ctx.parse("images", text, system) for gen, text in ctx.arg("images").items()}
    outcome = check_induced_action(scenario.map(map_name), chained, images)
    return _outcome_record(outcome, {"generators": len(images)})


def _step_monomial_profile(ctx: StepContext) -> Tuple[bool, Any, str]:
    scenario = ctx.scenario
    map_name = ctx.arg("map")
    target = scenario.map_system(map_name)
    system = ctx.arg("in", target)
    generators = [
        scenario.lift(ctx.parse("generators", text, system), system, target) for text in ctx.arg("generators")
    ]
    profile = monomial_profile(scenario.map(map_name), generators)
    if profile is None:
        return False, None, "some image is not a unit times a Laurent monomial in the generators"
    witness = profile.to_dict()
    expect = ctx.arg("expect", {})
    if "matrix" in expect and expect["matrix"] != profile.matrix:
        return False, witness, "exponent matrix differs from the expected one"
    if "determinant" in expect and expect["determinant"] != profile.determinant:
        return False, witness, "determinant differs from the expected one"
    return True, witness, ""


def _step_generation(ctx: StepContext) -> Tuple[bool, Any, str]:
    return _outcome_record(check_generation(ctx.scenario.system(ctx.arg("system"))))


def _step_relation(ctx: StepContext) -> Tuple[bool, Any, str]:
    scenario = ctx.scenario
    name = ctx.arg("relation")
    system = ctx.arg("system", scenario.definition_system(name))
    outcome = check_relation(scenario.relation(name), scenario.chain_to(system))
    return _outcome_record(outcome)


def _step_eliminate(ctx: StepContext) -> Tuple[bool, Any, str]:
    scenario = ctx.scenario
    system = scenario.system(ctx.arg("system"))
    eliminant = eliminate(system, ctx.arg("order", None))
    divisor = scenario.relation(ctx.arg("divisor")).polynomial.with_variables(eliminant.variables)
    witness = {"terms": len(eliminant), "degree": eliminant.degree()}
    cofactor = eliminant.try_divexact(divisor)
    if cofactor is None:
        witness["residue"] = _render(eliminant)
        return False, witness, "relation does not divide the eliminant"
    witness["cofactor_degree"] = cofactor.degree()
    return True, witness, ""


def _step_transport(ctx: StepContext) -> Tuple[bool, Any, str]:
    scenario = ctx.scenario
    variables = tuple(ctx.arg("variables"))
    r_old = scenario.relation(ctx.arg("from"))
    r_new = scenario.relation(ctx.arg("to"))
    rewrite = {
        gen: scenario.parse(text, "", ctx.where("rewrite"), variables) for gen, text in ctx.arg("rewrite").items()
    }
    root = None
    root_spec = ctx.arg("root", None)
    if root_spec is not None:
        root = QuadraticRoot(
            root_spec["name"],
            scenario.polynomial(root_spec["trace"], variables, ctx.where("root.trace")),
            scenario.polynomial(root_spec["norm"], variables, ctx.where("root.norm")),
        )
    outcome = check_transport(r_old, rewrite, r_new, root)
    witness = None
    if outcome.passed:
        constant, mono = outcome.detail["constant"], outcome.detail["monomial"]
        witness = {"constant": str(constant), "monomial": format_monomial(r_new.variables, mono) or "1"}
    return _outcome_record(outcome, witness)


def _step_descent(ctx: StepContext) -> Tuple[bool, Any, str]:
    scenario = ctx.scenario
    map_name = ctx.arg("map")
    system = scenario.map_system(map_name)
    invariants = {name: ctx.parse("invariants", text, system) for name, text in ctx.arg("invariants").items()}
    names = tuple(invariants)
    witness = QuadraticDescentWitness(
        t=ctx.parse("t", ctx.arg("t"), system),
        sigma_t=ctx.parse("sigma_t", ctx.arg("sigma_t"), system),
        invariants=invariants,
        trace=scenario.parse(ctx.arg("trace"), "", ctx.where("trace"), names),
        norm=scenario.parse(ctx.arg("norm"), "", ctx.where("norm"), names),
    )
    outcome = check_quadratic_descent(witness, scenario.map(map_name))
    return _outcome_record(outcome, {"trace": ctx.arg("trace"), "norm": ctx.arg("norm")})


def _step_singular(ctx: StepContext) -> Tuple[bool, Any, str]:
    scenario = ctx.scenario
    name = ctx.arg("relation")
    relation = scenario.relation(name)
    variables = relation.variables
    locus = {v: scenario.parse(text, "", ctx.where("locus"), variables) for v, text in ctx.arg("locus").items()}
    outcome = check_singular_substitution(relation, locus, ctx.arg("distinguished", None))
    return _outcome_record(outcome)


def _step_solve(ctx: StepContext) -> Tuple[bool, Any, str]:
    scenario = ctx.scenario
    relation = scenario.relation(ctx.arg("relation"))
    variable = ctx.arg("variable")
    solution = solve_linear_variable(relation, variable)
    witness = {"solution": _render(solution)}
    outcome = check_solution(relation, variable, solution)
    if not outcome.passed:
        return _outcome_record(outcome, witness)
    expect = ctx.arg("expect", None)
    if expect is not None:
        expected = scenario.parse(expect, "", ctx.where("expect"), relation.variables)
        if expected != solution:
            witness["residue"] = _render(solution - expected)
            return False, witness, "solution differs from the expected expression"
    return True, witness, ""


def _step_identity(ctx: StepContext) -> Tuple[bool, Any, str]:
    scenario = ctx.scenario
    default = ctx.arg("in", scenario.base)
    lhs_in, rhs_in = ctx.arg("lhs_in", default), ctx.arg("rhs_in", default)
    target = ctx.arg("target", scenario.base)
    lhs = scenario.lift(ctx.parse("lhs", ctx.arg("lhs"), lhs_in), lhs_in, target)
    rhs = scenario.lift(ctx.parse("rhs", ctx.arg("rhs"), rhs_in), rhs_in, target)
    outcome = _cross_check(ctx, lhs, rhs, check_identity(lhs, rhs))
    return _outcome_record(outcome)


def _step_invariance(ctx: StepContext) -> Tuple[bool, Any, str]:
    scenario = ctx.scenario
    map_name = ctx.arg("map")
    target = scenario.map_system(map_name)
    system = ctx.arg("in", target)
    expr = scenario.lift(ctx.parse("expr", ctx.arg("expr"), system), system, target)
    m = scenario.map(map_name)
    outcome = check_invariance(m, expr)
    if outcome.passed:
        outcome = _cross_check(ctx, pullback(m, expr), expr, outcome)
    return _outcome_record(outcome)


HANDLERS: Dict[str, Callable[[StepContext], Tuple[bool, Any, str]]] = {
    "involution": _step_involution,
    "reduction": _step_reduction,
    "action": _step_action,
    "induced_action": _step_induced_action,
    "monomial_profile": _step_monomial_profile,
    "generation": _step_generation,
    "relation": _step_relation,
    "eliminate": _step_eliminate,
    "transport": _step_transport,
    "descent": _step_descent,
    "singular": _step_singular,
    "solve": _step_solve,
    "identity": _step_identity,
    "invariance": _step_invariance,
}


# -- scenarios ----------------------------------------------------------------------


def prepare(scenario: Scenario) -> None:
    """Parse every definition, system and map up front so bad input fails early."""
    spec = scenario.spec
    for name in spec.definitions:
        scenario.definition(name)
    for system in spec.systems:
        scenario.system(system.name)
    for name in spec.maps:
        scenario.map(name)


def run_scenario(
    scenario: Scenario,
    seed: int = 0,
    only: Optional[Iterable[str]] = None,
) -> ScenarioResult:
    """Execute the steps in order; failures are recorded, never raised."""
    prepare(scenario)
    wanted = set(only) if only is not None else None
    result = ScenarioResult(scenario.id, scenario.title)
    rng = random.Random(seed)
    for step in scenario.spec.steps:
        if wanted is not None and step.id not in wanted:
            continue
        ctx = StepContext(scenario, step, rng)
        started = time.perf_counter()
        try:
            passed, witness, message = HANDLERS[step.op](ctx)
        except (AlgebraError, ScenarioError) as exc:
            passed, witness, message = False, None, f"{type(exc).__name__}: {exc}"
        except Exception as exc:  # noqa: BLE001
            logger.exception("Step crashed", scenario=scenario.id, step=step.id)
            passed, witness, message = False, None, f"{type(exc).__name__}: {exc}"
        record = StepRecord(
            id=step.id,
            op=step.op,
            passed=bool(passed),
            witness=witness,
            message=message,
            display=step.display,
            duration=time.perf_counter() - started,
        )
        if not record.passed:
            logger.warning("Step failed", scenario=scenario.id, step=step.id, message=message)
        else:
            logger.info("Step passed", scenario=scenario.id, step=step.id, seconds=round(record.duration, 3))
        result.steps.append(record)
    logger.info("Scenario finished", scenario=scenario.id, passed=result.passed)
    return result


def _run_path(path: str, seed: int) -> ScenarioResult:
    return run_scenario(load_scenario(Path(path)), seed)


def run_sections(
    sections: Sequence[str],
    seed: int = 0,
    directory: Optional[Path] = None,
    workers: int = 1,
) -> List[ScenarioResult]:
    directory = Path(directory or settings.scenario_dir)
    paths = [str(find_scenario(directory, section)) for section in sections]
    if workers > 1 and len(paths) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_path, paths, [seed] * len(paths)))
    else:
        results = [_run_path(path, seed) for path in paths]
    return sorted(results, key=lambda r: r.id)


# -- errata ---------------------------------------------------------------------------


def _maps_agree(a, b) -> bool:
    return a.variables == b.variables and all(x == y for x, y in zip(a.images, b.images))


def _failure_line(scenario_id: str, step: StepRecord) -> str:
    reason = step.message
    if isinstance(step.witness, dict) and "residue" in step.witness:
        reason = f"residue {step.witness['residue']}"
    return f"{scenario_id}/{step.id}: {reason}"


def detect_errata(
    directory: Optional[Path] = None,
    seed: int = 0,
    cache: Optional[Dict[str, ScenarioResult]] = None,
) -> Dict[str, Any]:
    """Run every reading of each inconsistent display and report which survive."""
    directory = Path(directory or settings.scenario_dir)
    document = json.loads((directory / "errata.json").read_text(encoding="utf-8"))
    cache = cache if cache is not None else {}

    def result_for(scenario_id: str) -> ScenarioResult:
        if scenario_id not in cache:
            cache[scenario_id] = run_scenario(load_scenario(find_scenario(directory, scenario_id)), seed)
        return cache[scenario_id]

    questions = []
    for question in document["questions"]:
        reduced = None
        reduce_spec = question.get("reduce")
        if reduce_spec is not None:
            source = load_scenario(find_scenario(directory, reduce_spec["scenario"]))
            try:
                reduced = reduce_mod_p(source.map(reduce_spec["map"]), int(reduce_spec["prime"]))
            except AlgebraError as exc:
                logger.warning("Reference reduction failed", question=question["id"], error=str(exc))
        candidates = []
        for candidate in question["candidates"]:
            results = [result_for(sid) for sid in candidate["scenarios"]]
            involution_steps = [s for r in results for s in r.steps if s.op == "involution"]
            checks: Dict[str, bool] = {}
            if involution_steps:
                checks["involution"] = all(s.passed for s in involution_steps)
            if reduced is not None and "map" in candidate:
                ref = candidate["map"]
                candidate_map = load_scenario(find_scenario(directory, ref["scenario"])).map(ref["name"])
                checks["reduction"] = _maps_agree(candidate_map, reduced)
            checks["chain"] = all(r.passed for r in results)
            failures = [_failure_line(r.id, s) for r in results for s in r.failures()]
            candidates.append(
                {
                    "name": candidate["name"],
                    "text": candidate["text"],
                    "checks": checks,
                    "passed": all(checks.values()),
                    "failures": failures,
                }
            )
        winners = [c["name"] for c in candidates if c["passed"]]
        if len(winners) == 1:
            verdict = f"resolved: {winners[0]}"
        elif not winners:
            verdict = "unverifiable under every reading"
        else:
            verdict = "ambiguous: " + ", ".join(winners)
        logger.info("Erratum decided", question=question["id"], verdict=verdict)
        questions.append(
            {
                "id": question["id"],
                "description": question.get("description", ""),
                "verdict": verdict,
                "candidates": candidates,
            }
        )
    return {
        "passed": all(q["verdict"].startswith("resolved") for q in questions),
        "questions": questions,
    }


# -- mutation sensitivity ----------------------------------------------------------------


def _references(value: Any, name: str, key: str = "") -> bool:
    if isinstance(value, str):
        return (key in RELATION_KEYS and value == name) or f"${name}" in value
    if isinstance(value, dict):
        return any(_references(v, name, k) for k, v in value.items())
    if isinstance(value, list):
        return any(_references(v, name, key) for v in value)
    return False


def relation_names(spec: ScenarioSpec) -> List[str]:
    names = set()
    for step in spec.steps:
        for key in RELATION_KEYS:
            value = step.args.get(key)
            if isinstance(value, str) and value in spec.definitions:
                names.add(value)
    return sorted(names)


def mutate_definition(spec: ScenarioSpec, name: str, monomial: Tuple[int, ...], delta: int = 1) -> ScenarioSpec:
    """Copy of ``spec`` with one coefficient of definition ``name`` shifted by ``delta``."""
    scenario = Scenario(spec)
    poly = scenario.relation(name).polynomial
    field = poly.field
    terms: Dict[Tuple[int, ...], Coefficient] = dict(poly.terms)
    value = field.normalize(terms.get(monomial, 0) + delta)
    if value:
        terms[monomial] = value
    else:
        terms.pop(monomial, None)
    mutated = Polynomial.from_terms(field, poly.variables, terms)
    data = spec.model_dump(by_alias=True)
    data["definitions"][name]["expr"] = format_expression(mutated)
    return ScenarioSpec.model_validate(data)


def mutation_sweep(
    seed: int = 0,
    count: int = 10,
    directory: Optional[Path] = None,
    sections: Sequence[str] = SECTIONS,
) -> List[Dict[str, Any]]:
    """Perturb single coefficients of shipped relations; each must break some step."""
    directory = Path(directory or settings.scenario_dir)
    rng = random.Random(seed)
    pool: List[Tuple[ScenarioSpec, str]] = []
    for section in sections:
        spec = load_scenario(find_scenario(directory, section)).spec
        pool.extend((spec, name) for name in relation_names(spec))
    outcomes: List[Dict[str, Any]] = []
    if not pool:
        return outcomes
    for _ in range(count):
        spec, name = rng.choice(pool)
        poly = Scenario(spec).relation(name).polynomial
        monomial = rng.choice(sorted(poly.terms))
        mutated = mutate_definition(spec, name, monomial)
        steps = [s.id for s in spec.steps if _references(s.args, name)]
        result = run_scenario(Scenario(mutated), seed, only=steps)
        caught = [s.id for s in result.failures()]
        outcomes.append(
            {
                "scenario": spec.id,
                "relation": name,
                "monomial": format_monomial(poly.variables, monomial) or "1",
                "caught_by": caught,
                "passed": bool(caught),
            }
        )
        if not caught:
            logger.warning("Mutation went unnoticed", scenario=spec.id, relation=name)
    return outcomes


# -- display coverage ----------------------------------------------------------------------


# Displays each section must reproduce; the manifest names the step for every key.
REQUIRED_DISPLAYS: Dict[str, Tuple[str, ...]] = {
    "sec2": (
        "sigma-order-two",
        "y-action",
        "exponent-determinant",
        "x-in-y",
        "relation-f",
        "relation-g",
        "u-relation",
        "v-relation-h",
        "singular-locus",
        "w-relation",
        "w3-solution",
        "w-ratio",
        "w-invariance",
        "final-generators",
    ),
    "sec3-char2": (
        "char2-map",
        "char2-y-generators",
        "char2-y-action",
        "char2-z-generators",
        "char2-z-action",
        "char2-invariants",
        "char2-final-generators",
        "char2-final-invariance",
    ),
    "sec3-char3": (
        "char3-map",
        "char3-y-generators",
        "char3-y-action",
        "char3-invariants",
        "char3-final-generators",
        "char3-final-invariance",
    ),
    "sec4": (
        "char2-exceptional-action",
        "char2-exponent-determinant",
        "char2-x2-in-y",
        "char2-relation-f",
        "char2-relation-g",
        "char2-u-relation",
        "char2-u3-solution",
        "char2-u-in-x",
    ),
    "sec5": (
        "char3-monomial-action",
        "char3-relation-g",
        "char3-u-relation",
        "char3-u3-solution",
        "char3-u-in-x",
    ),
}


def load_manifest(directory: Optional[Path] = None) -> List[Dict[str, str]]:
    path = Path(directory or settings.scenario_dir) / "manifest.json"
    if not path.exists():
        return []
    return json.loads(path.read_text(encoding="utf-8"))["displays"]


def display_coverage(report: VerificationReport, directory: Optional[Path] = None) -> PropertyResult:
    """Required displays are listed, and every listed display of a scenario that ran is reproduced by a passing step."""
    ran = {r.id: r for r in report.scenarios}
    checked = 0
    problems: List[str] = []
    manifest = load_manifest(directory)
    listed = {(entry["scenario"], entry["key"]) for entry in manifest}
    for scenario_id in sorted(ran):
        for key in REQUIRED_DISPLAYS.get(scenario_id, ()):
            if (scenario_id, key) not in listed:
                problems.append(f"{key}: not listed for {scenario_id}")
    for entry in manifest:
        result = ran.get(entry["scenario"])
        if result is None:
            continue
        checked += 1
        try:
            step = result.step(entry["step"])
        except KeyError:
            problems.append(f"{entry['key']}: no step {entry['scenario']}/{entry['step']}")
            continue
        if step.display != entry["key"]:
            problems.append(f"{entry['key']}: step {step.id} is labelled {step.display!r}")
        elif not step.passed:
            problems.append(f"{entry['key']}: step {step.id} failed")
    return PropertyResult("display-coverage", checked, not problems, "; ".join(problems))


# -- aggregate ---------------------------------------------------------------------------


def run_all(
    seed: int = 0,
    sections: Optional[Sequence[str]] = None,
    directory: Optional[Path] = None,
    workers: int = 1,
    with_properties: bool = True,
    with_errata: bool = True,
    mutations: int = 10,
) -> VerificationReport:
    """Scenarios, the erratum comparison, property suites and the mutation sweep."""
    sections = SECTIONS if sections is None else tuple(sections)
    report = VerificationReport(seed=seed)
    if not sections:
        return report
    directory = Path(directory or settings.scenario_dir)
    report.scenarios = run_sections(sections, seed, directory, workers)
    report.properties.append(display_coverage(report, directory))
    if with_errata:
        cache = {r.id: r for r in report.scenarios}
        report.errata = detect_errata(directory, seed, cache)
    if with_properties:
        report.properties.extend(run_properties(seed))
        if mutations:
            sweep = mutation_sweep(seed, mutations, directory, sections)
            failed = [m for m in sweep if not m["passed"]]
            report.properties.append(
                PropertyResult(
                    "mutation-sensitivity",
                    len(sweep),
                    not failed,
                    "; ".join(f"{m['scenario']}/{m['relation']} at {m['monomial']}" for m in failed),
                )
            )
    logger.info("Verification finished", seed=seed, passed=report.passed)
    return report


def available_sections(directory: Optional[Path] = None) -> List[str]:
    return [p.stem for p in list_scenarios(Path(directory or settings.scenario_dir))]
