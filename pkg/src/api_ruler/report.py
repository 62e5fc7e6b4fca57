"""Rendering of analysis reports: console text, Markdown, JSON."""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime, timezone

from .rules import RULES_BY_ID, violation_severity


@dataclass(frozen=True)
class RenderedReport:
    format: str  # "Console" | "Markdown" | "Json"
    content: str


def _line_label(line):
    return "?" if line == 0 else str(line)


def render_console(report):
    """One line per violation plus a trailing summary."""
    lines = [
        f"{_line_label(v.line)}:{v.path_template} [{v.rule_id}] {v.message}"
        for v in report.violations
    ]
    rules_hit = sum(1 for count in report.counts_by_rule.values() if count > 0)
    lines.append(
        f"{len(report.violations)} violations across {rules_hit} rules"
    )
    return RenderedReport(format="Console", content="\n".join(lines) + "\n")


def _timestamp(epoch):
    return datetime.fromtimestamp(epoch, tz=timezone.utc).strftime("%Y-%m-%d %H:%M:%S UTC")


def render_markdown(report):
    """Detailed report: per-rule sections with metadata and violation tables."""
    out = []
    out.append(f"# Design-rule report for `{report.source_name}`")
    out.append("")
    out.append(f"- Started: {_timestamp(report.started_at)}")
    out.append(f"- Finished: {_timestamp(report.finished_at)}")
    out.append(f"- Total violations: {len(report.violations)}")
    out.append("")

    if not report.violations:
        out.append("No violations found.")
    else:
        # Sections follow the fixed rule order, skipping rules with no hits.
        for rule in report.rules_run:
            hits = [v for v in report.violations if v.rule_id == rule.id]
            if not hits:
                continue
            out.append(f"## {rule.id}")
            out.append("")
            out.append(f"- Category: {rule.category.value}")
            out.append(f"- Severity: {rule.severity.value}")
            out.append(f"- Rule: {rule.title}")
            out.append(f"- Suggestion: {rule.suggestion}")
            out.append("")
            out.append("| Line | Path | Method | Evidence |")
            out.append("| --- | --- | --- | --- |")
            for v in hits:
                out.append(
                    f"| {_line_label(v.line)} | `{v.path_template}` "
                    f"| {v.method or '-'} | {v.evidence} |"
                )
            out.append("")

    if report.errors:
        out.append("## Warnings")
        out.append("")
        for warning in report.errors:
            out.append(f"- {warning}")
        out.append("")
    return RenderedReport(format="Markdown", content="\n".join(out).rstrip("\n") + "\n")


def render_json(report):
    """Stable-schema machine-readable report (docs/report.schema.json)."""
    payload = {
        "source": report.source_name,
        "violations": [
            {
                "rule": v.rule_id,
                "path": v.path_template,
                "method": v.method,
                "line": v.line,
                "message": v.message,
                "evidence": v.evidence,
                "severity": violation_severity(v).value,
                "category": RULES_BY_ID[v.rule_id].category.value,
            }
            for v in report.violations
        ],
        "counts": {rule.id: report.counts_by_rule.get(rule.id, 0)
                   for rule in report.rules_run},
        "warnings": list(report.errors),
    }
    return RenderedReport(format="Json", content=json.dumps(payload, indent=2) + "\n")
