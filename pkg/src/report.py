"""Verification reports and their text/JSON serialization."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

from .utils.formatting import format_report_text

FORMATS = ("text", "json")
FORMAT_ALIASES = {"json-like": "json"}


@dataclass(slots=True)
class StepRecord:
    id: str
    op: str
    passed: bool
    witness: Any = None
    message: str = ""
    display: Optional[str] = None
    duration: float = 0.0

    def to_dict(self, timings: bool = False) -> Dict[str, Any]:
        data: Dict[str, Any] = {"id": self.id, "op": self.op, "passed": self.passed}
        if self.display:
            data["display"] = self.display
        if self.witness is not None:
            data["witness"] = self.witness
        if self.message:
            data["message"] = self.message
        if timings:
            data["duration"] = round(self.duration, 6)
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "StepRecord":
        return cls(
            id=data["id"],
            op=data["op"],
            passed=bool(data["passed"]),
            witness=data.get("witness"),
            message=data.get("message", ""),
            display=data.get("display"),
            duration=float(data.get("duration", 0.0)),
        )


@dataclass(slots=True)
class ScenarioResult:
    id: str
    title: str
    steps: List[StepRecord] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(step.passed for step in self.steps)

    def step(self, step_id: str) -> StepRecord:
        for record in self.steps:
            if record.id == step_id:
                return record
        raise KeyError(step_id)

    def failures(self) -> List[StepRecord]:
        return [step for step in self.steps if not step.passed]

    def to_dict(self, timings: bool = False) -> Dict[str, Any]:
        ordered = sorted(self.steps, key=lambda s: s.id)
        return {
            "id": self.id,
            "title": self.title,
            "passed": self.passed,
            "steps_passed": sum(1 for s in ordered if s.passed),
            "steps_total": len(ordered),
            "steps": [s.to_dict(timings) for s in ordered],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ScenarioResult":
        return cls(
            id=data["id"],
            title=data.get("title", ""),
            steps=[StepRecord.from_dict(s) for s in data.get("steps", [])],
        )


@dataclass(slots=True)
class PropertyResult:
    name: str
    cases: int
    passed: bool
    message: str = ""

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"name": self.name, "cases": self.cases, "passed": self.passed}
        if self.message:
            data["message"] = self.message
        return data


@dataclass(slots=True)
class VerificationReport:
    seed: int = 0
    scenarios: List[ScenarioResult] = field(default_factory=list)
    errata: Optional[Dict[str, Any]] = None
    properties: List[PropertyResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        if not all(s.passed for s in self.scenarios):
            return False
        if not all(p.passed for p in self.properties):
            return False
        if self.errata is not None and not self.errata.get("passed", True):
            return False
        return True

    def scenario(self, scenario_id: str) -> ScenarioResult:
        for result in self.scenarios:
            if result.id == scenario_id:
                return result
        raise KeyError(scenario_id)

    def verdicts(self) -> Dict[str, Any]:
        """Flat ``scenario/step -> passed`` map, the seed-independent part of a report."""
        out: Dict[str, Any] = {}
        for result in self.scenarios:
            for step in result.steps:
                out[f"{result.id}/{step.id}"] = step.passed
        for prop in self.properties:
            out[f"properties/{prop.name}"] = prop.passed
        if self.errata is not None:
            for question in self.errata.get("questions", []):
                out[f"errata/{question['id']}"] = question["verdict"]
        return out

    def to_dict(self, timings: bool = False) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "seed": self.seed,
            "passed": self.passed,
            "scenarios": [s.to_dict(timings) for s in sorted(self.scenarios, key=lambda s: s.id)],
        }
        if self.errata is not None:
            data["errata"] = self.errata
        if self.properties:
            data["properties"] = [p.to_dict() for p in self.properties]
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "VerificationReport":
        return cls(
            seed=int(data.get("seed", 0)),
            scenarios=[ScenarioResult.from_dict(s) for s in data.get("scenarios", [])],
            errata=data.get("errata"),
            properties=[
                PropertyResult(p["name"], int(p["cases"]), bool(p["passed"]), p.get("message", ""))
                for p in data.get("properties", [])
            ],
        )


def normalize_format(fmt: str) -> str:
    fmt = FORMAT_ALIASES.get(fmt, fmt)
    if fmt not in FORMATS:
        raise ValueError(f"unknown report format {fmt!r}")
    return fmt


def render_report(report: VerificationReport, fmt: str = "text", timings: bool = False) -> str:
    fmt = normalize_format(fmt)
    data = report.to_dict(timings)
    if fmt == "json":
        return json.dumps(data, ensure_ascii=False, indent=2) + "\n"
    return format_report_text(data)


def save_report(report: VerificationReport, path: Path, fmt: str = "json", timings: bool = False) -> None:
    Path(path).write_text(render_report(report, fmt, timings), encoding="utf-8")


def load_report(path: Path) -> VerificationReport:
    """Read a report written with the JSON format."""
    return VerificationReport.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
