"""
utils/report_io.py — Human and structured renderings of reports.
Structured output is a single JSON document per invocation carrying schema_version.
"""

from __future__ import annotations

import json
from typing import Any, Dict, List, Optional

from pydantic import BaseModel

from models import (
    SCHEMA_VERSION,
    ClassificationReport,
    ComparisonReport,
    SearchOutcome,
    StrataVerdict,
    SurfaceIssue,
    SurfaceReport,
    Verdict,
)


def structured(command: str, **sections: Any) -> str:
    """One JSON document: {"schema_version", "command", <sections>}; models are dumped in JSON mode."""
    doc: Dict[str, Any] = {"schema_version": SCHEMA_VERSION, "command": command}
    for key, value in sections.items():
        if isinstance(value, BaseModel):
            doc[key] = value.model_dump(mode="json")
        elif isinstance(value, list):
            doc[key] = [v.model_dump(mode="json") if isinstance(v, BaseModel) else v for v in value]
        else:
            doc[key] = value
    return json.dumps(doc, indent=2, ensure_ascii=False)


def read_structured(text: str) -> Dict[str, Any]:
    doc = json.loads(text)
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {doc.get('schema_version')!r}")
    return doc


def classification_from_structured(text: str) -> ClassificationReport:
    return ClassificationReport.model_validate(read_structured(text)["report"])


# ── Human renderings ───────────────────────────────────────────


def render_verdict(verdict: Verdict, indent: str = "") -> List[str]:
    answer = "realizable" if verdict.realizable else "not realizable"
    lines = [f"{indent}[{verdict.path}] {verdict.monodromy}: {answer}"]
    cert = verdict.certificate
    lines.append(f"{indent}  certificate: {cert.clause}" + (f" ({cert.summary})" if cert.summary else ""))
    if verdict.assignment is not None:
        a = verdict.assignment
        lines.append(
            f"{indent}  assignment: {a.stratum} residues ({','.join(a.pole_residues)})"
            + (f" [{a.strata_clause}]" if a.strata_clause else "")
        )
    if verdict.budget is not None:
        lines.append(f"{indent}  budget: K={verdict.budget.K}, M={verdict.budget.M}")
    if verdict.gauss_bonnet:
        lines.append(f"{indent}  plain Gauss-Bonnet: {verdict.gauss_bonnet}")
    if verdict.divergence:
        lines.append(f"{indent}  divergence: {verdict.divergence}")
    for note in verdict.notes:
        lines.append(f"{indent}  note: {note}")
    for component in verdict.components:
        lines.extend(render_verdict(component, indent + "    "))
    return lines


def render_classification(report: ClassificationReport) -> str:
    lines = [f"{report.distribution} [{report.monodromy}]"]
    lines += render_verdict(report.literal, "  ")
    lines += render_verdict(report.reduction, "  ")
    lines.append(f"  paths: {'DIVERGE (' + report.divergence + ')' if report.divergence else 'agree'}")
    if report.search is not None:
        lines.append(f"  witness search: {render_outcome(report.search)}")
    return "\n".join(lines)


def render_comparison(report: ComparisonReport) -> str:
    lines = [f"{report.distribution}: class comparison"]
    for verdict in (report.coaxial, report.strict, report.any):
        lines += render_verdict(verdict, "  ")
    for law in report.laws:
        state = "n/a" if not law.applies else ("holds" if law.holds else "VIOLATED")
        lines.append(f"  law {law.name}: {state}" + (f" ({law.explanation})" if law.explanation else ""))
    for item in report.documented_exceptions:
        lines.append(f"  documented exception: {item}")
    return "\n".join(lines)


def render_strata(verdict: StrataVerdict) -> str:
    answer = "realizable" if verdict.realizable else f"not realizable ({verdict.clause})"
    lines = [answer]
    for key, value in verdict.detail.items():
        lines.append(f"  {key}: {value}")
    if verdict.also_matched:
        lines.append(f"  also matched: {', '.join(verdict.also_matched)}")
    return "\n".join(lines)


def render_surface(report: Optional[SurfaceReport], issues: List[SurfaceIssue]) -> str:
    if issues:
        return "\n".join(["invalid surface:"] + [f"  {i.kind}: {', '.join(i.ids)} {i.message}".rstrip() for i in issues])
    assert report is not None
    return "\n".join(
        [
            f"genus {report.genus} (V={report.vertices}, E={report.edges}, F={report.faces})",
            f"  equatorial angles (×π): {', '.join(str(k) for k in report.equatorial_angles)}",
            f"  pole angles (×2π): {', '.join(str(w) for w in report.pole_angles)}",
            f"  stratum: {report.stratum}",
            f"  square: {'yes' if report.is_square else 'no'}; monodromy: {report.monodromy_class}",
            f"  period generators: {', '.join(str(p) for p in report.period_generators)}",
            f"  regular points: {report.regular_points}",
        ]
    )


def render_outcome(outcome: SearchOutcome) -> str:
    text = f"{outcome.status} ({outcome.examined} gluings examined"
    if outcome.skipped:
        text += f", {len(outcome.skipped)} configuration(s) beyond {outcome.bounds.max_segments} segments"
    text += f", up to {outcome.bounds.max_regular} regular vertices)"
    return text
