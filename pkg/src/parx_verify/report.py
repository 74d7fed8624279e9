"""Report assembly and rendering.

The JSON report (``schema_version`` 1) is the machine-readable product; the
human-readable tables are a pure function of that same dictionary, so a
report loaded back from disk re-renders byte-identically.
"""

from __future__ import annotations

import json
from datetime import datetime, timezone
from typing import Any

SCHEMA_VERSION = 1
TOOL_NAME = "parx-verify"

VERDICT_CONSISTENT = "consistent"
VERDICT_INCONSISTENT = "inconsistent"
VERDICT_ERROR = "error"


def compact_iri(iri: str, prefixes: dict[str, str]) -> str:
    """Render an IRI as a prefixed name when a registered base matches."""
    if iri.startswith("_:"):
        return iri
    best: tuple[int, str, str] | None = None
    for prefix, base in prefixes.items():
        if iri.startswith(base) and (best is None or (len(base), prefix) > (best[0], best[1])):
            best = (len(base), prefix, base)
    if best is None:
        return iri
    _, prefix, base = best
    return f"{prefix}:{iri[len(base):]}"


def local_name(iri: str | None) -> str:
    if not iri:
        return "-"
    return iri.rsplit("#", 1)[-1].rsplit("/", 1)[-1]


def timestamp_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def report_json(report: dict[str, Any]) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    def line(cells: list[str]) -> str:
        return " | ".join(cell.ljust(widths[i]) for i, cell in enumerate(cells)).rstrip()
    sep = "-+-".join("-" * w for w in widths)
    out = [line(headers), sep]
    out.extend(line(row) for row in rows)
    return "\n".join(out)


def _flag(in_context: bool) -> str:
    return "✓" if in_context else "✗"


def render_bindings_table(
    bindings: list[dict[str, Any]],
    prefixes: dict[str, str],
    with_operator: bool = False,
) -> str:
    if not bindings:
        return "(no variable bindings)"
    headers = ["Variable", "Data Element", "Filtered"]
    if with_operator:
        headers = ["Operator", "Formula"] + headers
    rows = []
    for b in bindings:
        row = [
            compact_iri(b["variable"], prefixes),
            compact_iri(b["data_element"], prefixes),
            _flag(b["in_context"]),
        ]
        if with_operator:
            row = [
                compact_iri(b["operator"], prefixes),
                compact_iri(b["formula"], prefixes),
            ] + row
        rows.append(row)
    return _table(headers, rows)


def render_unit_table(findings: list[dict[str, Any]], prefixes: dict[str, str]) -> str:
    if not findings:
        return "(no unit findings)"
    rows = []
    for f in findings:
        kind = f["kind"]
        if kind == "missing-expectation":
            expected = "(none declared)"
            actual = "-"
        elif kind == "unit-unknown":
            expected = compact_iri(f["expected_unit"], prefixes) if f["expected_unit"] else "-"
            actual = "(no unit classification)"
        else:
            expected = compact_iri(f["expected_unit"], prefixes) if f["expected_unit"] else "-"
            actual = compact_iri(f["actual_unit"], prefixes) if f["actual_unit"] else "-"
        rows.append(
            [
                compact_iri(f["variable"], prefixes),
                expected,
                actual,
                compact_iri(f["data_element"], prefixes) if f["data_element"] else "-",
            ]
        )
    return _table(["Variable", "Expected Unit", "Actual Unit", "Data Element"], rows)


def render_availability_table(
    findings: list[dict[str, Any]], prefixes: dict[str, str]
) -> str:
    if not findings:
        return "(no availability findings)"
    rows = [
        [
            compact_iri(f["missing_variable"], prefixes),
            compact_iri(f["process"], prefixes),
        ]
        for f in findings
    ]
    return _table(["Missing Data for Variable", "Process Context"], rows)


def format_value(value: float) -> str:
    return f"{value:.12g}"


def render_result_line(result: dict[str, Any], prefixes: dict[str, str]) -> str:
    unit = local_name(result.get("unit"))
    return (
        f"{compact_iri(result['target'], prefixes)} = "
        f"{format_value(result['value'])} [{unit}]"
    )


def render_evaluation_section(evaluation: dict[str, Any], prefixes: dict[str, str]) -> str:
    lines: list[str] = []
    if not evaluation["performed"]:
        lines.append(evaluation.get("note") or "skipped")
        return "\n".join(lines)
    results = evaluation["results"]
    if results:
        rows = [
            [
                compact_iri(r["process"], prefixes),
                compact_iri(r["formula"], prefixes) if r["formula"] else "-",
                compact_iri(r["target"], prefixes),
                format_value(r["value"]),
                local_name(r.get("unit")),
            ]
            for r in results
        ]
        lines.append(_table(["Process", "Formula", "Target", "Value", "Unit"], rows))
    else:
        lines.append("(no evaluation results)")
    for refusal in evaluation["refusals"]:
        lines.append(
            f"refused {compact_iri(refusal['formula'], prefixes)} "
            f"for {compact_iri(refusal['process'], prefixes)}:"
        )
        for reason in refusal["reasons"]:
            lines.append(f"  - {reason}")
    for error in evaluation["errors"]:
        lines.append(
            f"error in {compact_iri(error['formula'], prefixes)} "
            f"for {compact_iri(error['process'], prefixes)}: {error['message']}"
        )
    for notice in evaluation["notices"]:
        lines.append(f"note: {notice}")
    return "\n".join(lines)


def render_report(report: dict[str, Any]) -> str:
    prefixes = report["prefixes"]
    parts: list[str] = []
    parts.append(
        f"{report['tool']['name']} {report['tool']['version']} — verification report"
    )
    parts.append("inputs:")
    for path in report["inputs"]:
        parts.append(f"  - {path}")
    parts.append(f"verdict: {report['verdict'].upper()}")
    parts.append("")
    parts.append("== Context bindings ==")
    parts.append(render_bindings_table(report["context_bindings"], prefixes, with_operator=True))
    parts.append("")
    parts.append("== Unit findings ==")
    parts.append(render_unit_table(report["unit_findings"], prefixes))
    parts.append("")
    parts.append("== Data availability findings ==")
    parts.append(render_availability_table(report["availability_findings"], prefixes))
    if report["structural_findings"]:
        parts.append("")
        parts.append("== Structural findings ==")
        for f in report["structural_findings"]:
            parts.append(
                f"step {f['step']} [{f['code']}] "
                f"{compact_iri(f['process'], prefixes)}: {f['detail']}"
            )
    if report["warnings"]:
        parts.append("")
        parts.append("== Model warnings ==")
        for w in report["warnings"]:
            parts.append(f"[{w['code']}] {compact_iri(w['subject'], prefixes)}: {w['detail']}")
    parts.append("")
    parts.append("== Evaluation ==")
    parts.append(render_evaluation_section(report["evaluation"], prefixes))
    parts.append("")
    return "\n".join(parts)
