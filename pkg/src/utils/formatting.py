"""Canonical text rendering of polynomials, rational functions and reports."""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from ..algebra.polynomial import Monomial, Polynomial
from ..algebra.rational import RationalFunction


def format_monomial(variables: Sequence[str], mono: Monomial) -> str:
    """``x1^2*x3`` style; empty string for the unit monomial."""
    parts = []
    for name, e in zip(variables, mono):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def _format_term(variables: Sequence[str], mono: Monomial, coeff: Union[int, Fraction]) -> Tuple[bool, str]:
    negative = coeff < 0
    magnitude = -coeff if negative else coeff
    body = format_monomial(variables, mono)
    if not body:
        return negative, str(magnitude)
    if magnitude == 1:
        return negative, body
    return negative, f"{magnitude}*{body}"


def format_polynomial(p: Polynomial, max_terms: Optional[int] = None) -> str:
    """Terms in descending lexicographic order with explicit ``*`` and ``^``.

    With ``max_terms`` set, longer polynomials are cut and the number of hidden
    terms is appended.
    """
    if p.is_zero():
        return "0"
    pieces: List[str] = []
    shown = 0
    for mono, coeff in p.sorted_terms():
        if max_terms is not None and shown >= max_terms:
            pieces.append(f" + ... ({len(p) - shown} more terms)")
            break
        negative, text = _format_term(p.variables, mono, coeff)
        if not pieces:
            pieces.append(f"-{text}" if negative else text)
        else:
            pieces.append(f" - {text}" if negative else f" + {text}")
        shown += 1
    return "".join(pieces)


def _is_bare_power(p: Polynomial) -> bool:
    if len(p) != 1:
        return False
    mono, coeff = next(iter(p.terms.items()))
    return coeff == 1 and sum(1 for e in mono if e) == 1


def format_expression(e: Union[Polynomial, RationalFunction], max_terms: Optional[int] = None) -> str:
    if isinstance(e, Polynomial):
        return format_polynomial(e, max_terms)
    if e.is_polynomial():
        return format_polynomial(e.as_polynomial(), max_terms)
    num = format_polynomial(e.numerator, max_terms)
    den = format_polynomial(e.denominator, max_terms)
    if len(e.numerator) > 1:
        num = f"({num})"
    if not _is_bare_power(e.denominator):
        den = f"({den})"
    return f"{num}/{den}"


print_expression = format_expression


def format_witness(witness: Any) -> str:
    if witness is None:
        return ""
    if isinstance(witness, dict):
        return ", ".join(f"{k}={v}" for k, v in witness.items())
    return str(witness)


def format_report_text(report: Dict[str, Any]) -> str:
    """Plain-text rendering of ``VerificationReport.to_dict()``."""
    lines = [f"verification report (seed {report['seed']})"]
    for scenario in report.get("scenarios", []):
        verdict = "PASS" if scenario["passed"] else "FAIL"
        lines.append("")
        lines.append(
            f"[{scenario['id']}] {scenario['title']}: {verdict} ({scenario['steps_passed']}/{scenario['steps_total']})"
        )
        for step in scenario["steps"]:
            mark = "ok  " if step["passed"] else "FAIL"
            line = f"  {mark} {step['id']}  {step['op']}"
            witness = format_witness(step.get("witness"))
            if witness:
                line += f"  [{witness}]"
            if "duration" in step:
                line += f"  {step['duration']:.3f}s"
            lines.append(line)
            if step.get("message"):
                lines.append(f"       {step['message']}")
    errata = report.get("errata")
    if errata:
        lines.append("")
        lines.append("errata:")
        for question in errata["questions"]:
            lines.append(f"  {question['id']}: {question['verdict']}")
            for candidate in question["candidates"]:
                flags = ", ".join(f"{k}={'yes' if v else 'no'}" for k, v in candidate["checks"].items())
                lines.append(f"    {candidate['name']}: {candidate['text']} ({flags})")
                for failure in candidate.get("failures", []):
                    lines.append(f"      failed {failure}")
    properties = report.get("properties", [])
    if properties:
        lines.append("")
        lines.append("properties:")
        for prop in properties:
            mark = "ok  " if prop["passed"] else "FAIL"
            lines.append(f"  {mark} {prop['name']} ({prop['cases']} cases)")
            if prop.get("message"):
                lines.append(f"       {prop['message']}")
    lines.append("")
    lines.append(f"overall: {'PASS' if report['passed'] else 'FAIL'}")
    return "\n".join(lines) + "\n"
