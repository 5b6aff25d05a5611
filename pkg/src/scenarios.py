"""Scenario documents: schema, loading and expression resolution."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple

from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .algebra.fields import QQ, CoefficientField
from .algebra.polynomial import Polynomial
from .algebra.rational import RationalFunction
from .cremona import CremonaMap, map_from_mapping
from .errors import AlgebraError, ParseError, ScenarioError
from .parser import parse_expression
from .towers import ChangeOfVariables, Relation, chain

OPERATIONS = (
    "involution",
    "reduction",
    "action",
    "induced_action",
    "monomial_profile",
    "generation",
    "relation",
    "eliminate",
    "transport",
    "descent",
    "singular",
    "solve",
    "identity",
    "invariance",
)

Operation = Literal[
    "involution",
    "reduction",
    "action",
    "induced_action",
    "monomial_profile",
    "generation",
    "relation",
    "eliminate",
    "transport",
    "descent",
    "singular",
    "solve",
    "identity",
    "invariance",
]


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)


class FieldSpec(_Strict):
    characteristic: int = 0


class SystemSpec(_Strict):
    name: str
    old: str
    new: List[str]
    forward: List[str]
    backward: Optional[List[str]] = None


class DefinitionSpec(_Strict):
    in_: str = Field(alias="in")
    expr: str


class MapSpec(_Strict):
    in_: str = Field(alias="in")
    images: Dict[str, str]


class StepSpec(_Strict):
    id: str
    op: Operation
    args: Dict[str, Any] = Field(default_factory=dict)
    display: Optional[str] = None


class ScenarioSpec(_Strict):
    id: str
    title: str = ""
    field: FieldSpec = Field(default_factory=FieldSpec)
    base: str = "x"
    variables: List[str]
    reference: Optional[Dict[str, str]] = None
    systems: List[SystemSpec] = Field(default_factory=list)
    definitions: Dict[str, DefinitionSpec] = Field(default_factory=dict)
    maps: Dict[str, MapSpec] = Field(default_factory=dict)
    steps: List[StepSpec] = Field(default_factory=list)


def _error_path(loc: Tuple[Any, ...]) -> str:
    parts: List[str] = []
    for item in loc:
        if isinstance(item, int):
            parts.append(f"[{item}]")
        else:
            parts.append(f".{item}" if parts else str(item))
    return "".join(parts)


class Scenario:
    """A validated scenario with lazily built expressions, systems and maps."""

    def __init__(self, spec: ScenarioSpec, path: Optional[Path] = None) -> None:
        self.spec = spec
        self.path = path
        try:
            self.field = CoefficientField.of_characteristic(spec.field.characteristic)
        except ValueError as exc:
            raise ScenarioError(str(exc), "field.characteristic") from exc
        self._variables: Dict[str, Tuple[str, ...]] = {spec.base: tuple(spec.variables)}
        self._parents: Dict[str, str] = {}
        self._specs: Dict[str, SystemSpec] = {}
        for i, system in enumerate(spec.systems):
            if system.name in self._variables:
                raise ScenarioError(f"duplicate system {system.name!r}", f"systems[{i}].name")
            if system.old not in self._variables:
                raise ScenarioError(f"unknown parent system {system.old!r}", f"systems[{i}].old")
            self._variables[system.name] = tuple(system.new)
            self._parents[system.name] = system.old
            self._specs[system.name] = system
        self._systems: Dict[str, ChangeOfVariables] = {}
        self._chains: Dict[Tuple[str, str], ChangeOfVariables] = {}
        self._definitions: Dict[str, RationalFunction] = {}
        self._maps: Dict[str, CremonaMap] = {}

    @property
    def id(self) -> str:
        return self.spec.id

    @property
    def title(self) -> str:
        return self.spec.title

    @property
    def base(self) -> str:
        return self.spec.base

    # -- expressions --------------------------------------------------------

    def variables(self, system: str) -> Tuple[str, ...]:
        if system in self._variables:
            return self._variables[system]
        raise ScenarioError(f"unknown system {system!r}", "systems")

    def parse(self, text: str, system: str, where: str = "", variables: Optional[Tuple[str, ...]] = None) -> RationalFunction:
        variables = variables if variables is not None else self.variables(system)
        if text.startswith("$"):
            expr = self.definition(text[1:])
            return expr.with_variables(variables)
        try:
            return parse_expression(text, variables, self.field)
        except ParseError as exc:
            raise ScenarioError(f"cannot parse {text!r}: {exc}", where) from exc

    def definition(self, name: str) -> RationalFunction:
        if name not in self._definitions:
            spec = self.spec.definitions.get(name)
            if spec is None:
                raise ScenarioError(f"unknown definition {name!r}", "definitions")
            self._definitions[name] = self.parse(spec.expr, spec.in_, f"definitions.{name}")
        return self._definitions[name]

    def definition_system(self, name: str) -> str:
        spec = self.spec.definitions.get(name)
        if spec is None:
            raise ScenarioError(f"unknown definition {name!r}", "definitions")
        return spec.in_

    def relation(self, name: str) -> Relation:
        expr = self.definition(name)
        if not expr.is_polynomial():
            raise ScenarioError(f"relation {name!r} is not a polynomial", f"definitions.{name}")
        return Relation(name, expr.as_polynomial())

    # -- systems ------------------------------------------------------------

    def system(self, name: str) -> ChangeOfVariables:
        """The immediate change of variables ``name`` over its parent."""
        if name not in self._systems:
            spec = self._specs.get(name)
            if spec is None:
                raise ScenarioError(f"unknown system {name!r}", "systems")
            where = f"systems.{name}"
            forward = tuple(self.parse(text, spec.old, f"{where}.forward") for text in spec.forward)
            backward = None
            if spec.backward is not None:
                backward = tuple(self.parse(text, name, f"{where}.backward") for text in spec.backward)
            self._systems[name] = ChangeOfVariables(
                name, self.variables(spec.old), tuple(spec.new), forward, backward
            )
        return self._systems[name]

    def chain_to(self, name: str, target: Optional[str] = None) -> ChangeOfVariables:
        """``name``'s generators written in ``target``'s variables (the base by default)."""
        target = target or self.base
        if name == target:
            return ChangeOfVariables.identity(self.variables(name), self.field)
        key = (name, target)
        if key not in self._chains:
            parent = self._parents.get(name)
            if parent is None:
                raise ScenarioError(f"system {name!r} does not sit over {target!r}", "systems")
            step = self.system(name)
            self._chains[key] = step if parent == target else chain(step, self.chain_to(parent, target))
        return self._chains[key]

    def lift(self, expr: RationalFunction, system: str, target: Optional[str] = None) -> RationalFunction:
        target = target or self.base
        if system == target:
            return expr
        return self.chain_to(system, target).lift(expr)

    # -- maps ---------------------------------------------------------------

    def map(self, name: str) -> CremonaMap:
        if name not in self._maps:
            spec = self.spec.maps.get(name)
            if spec is None:
                raise ScenarioError(f"unknown map {name!r}", "maps")
            images = {
                v: self.parse(text, spec.in_, f"maps.{name}.images.{v}") for v, text in spec.images.items()
            }
            self._maps[name] = map_from_mapping(self.variables(spec.in_), images)
        return self._maps[name]

    def map_system(self, name: str) -> str:
        spec = self.spec.maps.get(name)
        if spec is None:
            raise ScenarioError(f"unknown map {name!r}", "maps")
        return spec.in_

    def reference_map(self) -> CremonaMap:
        """The characteristic-zero map this scenario's map should reduce from."""
        if self.spec.reference is None:
            raise ScenarioError("scenario has no reference map", "reference")
        variables = self.variables(self.base)
        images = {
            v: parse_expression(text, variables, QQ) for v, text in self.spec.reference.items()
        }
        return map_from_mapping(variables, images)

    def polynomial(self, text: str, variables: Tuple[str, ...], where: str) -> Polynomial:
        expr = self.parse(text, "", where, variables)
        if not expr.is_polynomial():
            raise ScenarioError(f"{text!r} is not a polynomial", where)
        return expr.as_polynomial()


def load_scenario(path: Path) -> Scenario:
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"invalid JSON: {exc.msg} (line {exc.lineno})", str(path)) from exc
    try:
        spec = ScenarioSpec.model_validate(raw)
    except ValidationError as exc:
        first = exc.errors()[0]
        raise ScenarioError(first["msg"], _error_path(tuple(first["loc"]))) from exc
    logger.debug("Loaded scenario", scenario=spec.id, steps=len(spec.steps), path=str(path))
    return Scenario(spec, path)


def list_scenarios(directory: Path) -> List[Path]:
    """Scenario files in ``directory``; bookkeeping documents are skipped."""
    skip = {"errata.json", "manifest.json"}
    return sorted(p for p in Path(directory).glob("*.json") if p.name not in skip)


def find_scenario(directory: Path, scenario_id: str) -> Path:
    path = Path(directory) / f"{scenario_id}.json"
    if not path.exists():
        raise ScenarioError(f"no scenario {scenario_id!r} in {directory}", "section")
    return path


class MapFileSpec(_Strict):
    """A standalone map document for the command line."""

    field: FieldSpec = Field(default_factory=FieldSpec)
    variables: List[str]
    images: Dict[str, str]


def load_map(path: Path) -> CremonaMap:
    path = Path(path)
    try:
        spec = MapFileSpec.model_validate(json.loads(path.read_text(encoding="utf-8")))
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"invalid JSON: {exc.msg} (line {exc.lineno})", str(path)) from exc
    except ValidationError as exc:
        first = exc.errors()[0]
        raise ScenarioError(first["msg"], _error_path(tuple(first["loc"]))) from exc
    try:
        field = CoefficientField.of_characteristic(spec.field.characteristic)
    except ValueError as exc:
        raise ScenarioError(str(exc), "field.characteristic") from exc
    variables = tuple(spec.variables)
    images: Dict[str, RationalFunction] = {}
    for name, text in spec.images.items():
        try:
            images[name] = parse_expression(text, variables, field)
        except ParseError as exc:
            raise ScenarioError(f"cannot parse {text!r}: {exc}", f"images.{name}") from exc
    try:
        return map_from_mapping(variables, images)
    except AlgebraError as exc:
        raise ScenarioError(str(exc), "images") from exc
