"""Benchmark harness: corpus runs, effectiveness scoring, performance tables.

Mirrors the evaluation protocol at desk scale: analyze every document in a
directory (failures recorded, never propagated), bucket files by path
count, and score reported violations against a JSONL gold-label file.
"""

from __future__ import annotations

import csv
import json
import os
import resource
import statistics
import time
from dataclasses import dataclass

from .engine import AnalysisConfig, analyze_source
from .errors import AnalysisAborted, ApiRulerError, DocumentTooLarge
from .report import render_json
from .rules import ALL_RULE_IDS

BUCKETS = [
    ("VerySmall", 0, 10),
    ("Small", 11, 30),
    ("Medium", 31, 70),
    ("Large", 71, 150),
    ("VeryLarge", 151, None),
]

CSV_COLUMNS = ["file", "outcome", "duration_ms", "path_count", "size_bucket",
               "violation_count", "peak_memory_bytes"]


def size_bucket(path_count):
    for name, low, high in BUCKETS:
        if path_count >= low and (high is None or path_count <= high):
            return name
    return "VerySmall"


@dataclass(frozen=True)
class CorpusRecord:
    file: str
    outcome: str  # Success | ParseError | Aborted
    duration_ms: float
    path_count: int
    size_bucket: str
    violation_count: int
    peak_memory_bytes: int


@dataclass(frozen=True)
class GoldLabel:
    file: str
    rule_id: str
    path_template: str
    expected: bool


@dataclass(frozen=True)
class EffectivenessScore:
    rule_id: str
    true_positives: int
    false_positives: int
    false_negatives: int

    @property
    def precision(self):
        reported = self.true_positives + self.false_positives
        return self.true_positives / reported if reported else None

    @property
    def recall(self):
        actual = self.true_positives + self.false_negatives
        return self.true_positives / actual if actual else None


def _peak_memory_bytes():
    # ru_maxrss is KiB on Linux; best-effort and platform-dependent.
    return resource.getrusage(resource.RUSAGE_SELF).ru_maxrss * 1024


def corpus_files(directory):
    names = [n for n in sorted(os.listdir(directory))
             if n.lower().endswith((".json", ".yaml", ".yml"))]
    return [os.path.join(directory, n) for n in names]


def run_corpus(directory, config=AnalysisConfig(), out_csv=None, reports_dir=None):
    """Analyze every JSON/YAML file in a directory; one record per file.

    Single-file failures are recorded as ParseError/Aborted outcomes and
    never abort the run.  Optionally writes per-file JSON reports (for
    score()) and a CSV of the records.
    """
    files = corpus_files(directory)
    if not files:
        raise ValueError(f"no JSON/YAML files in {directory!r}")

    records = []
    for path in files:
        name = os.path.basename(path)
        with open(path, "rb") as fh:
            data = fh.read()
        started = time.perf_counter()
        outcome = "Success"
        path_count = 0
        violation_count = 0
        report = None
        try:
            report = analyze_source(data, name, config)
            violation_count = len(report.violations)
        except (DocumentTooLarge, AnalysisAborted):
            outcome = "Aborted"
        except ApiRulerError:
            outcome = "ParseError"
        duration_ms = (time.perf_counter() - started) * 1000.0
        if outcome == "Success":
            path_count = _count_paths(data, config)
        records.append(CorpusRecord(
            file=name,
            outcome=outcome,
            duration_ms=duration_ms,
            path_count=path_count,
            size_bucket=size_bucket(path_count),
            violation_count=violation_count,
            peak_memory_bytes=_peak_memory_bytes(),
        ))
        if report is not None and reports_dir is not None:
            os.makedirs(reports_dir, exist_ok=True)
            out_path = os.path.join(reports_dir, name + ".report.json")
            with open(out_path, "w", encoding="utf-8") as fh:
                fh.write(render_json(report).content)

    if out_csv:
        write_records_csv(records, out_csv)
    return records


def _count_paths(data, config):
    from .model import parse_document
    try:
        return len(parse_document(data, "-", max_bytes=config.max_document_bytes).paths)
    except ApiRulerError:
        return 0


def success_rate(records):
    return sum(1 for r in records if r.outcome == "Success") / len(records)


def write_records_csv(records, path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for r in records:
            writer.writerow([r.file, r.outcome, f"{r.duration_ms:.3f}",
                             r.path_count, r.size_bucket, r.violation_count,
                             r.peak_memory_bytes])


def load_gold(path):
    labels = []
    seen = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            row = json.loads(line)
            key = (row["file"], row["rule_id"], row["path_template"])
            if key in seen:
                raise ValueError(f"duplicate gold label {key}")
            seen.add(key)
            labels.append(GoldLabel(
                file=row["file"],
                rule_id=row["rule_id"],
                path_template=row["path_template"],
                expected=bool(row["expected"]),
            ))
    return labels


def load_reported(report_paths):
    """(file, rule, path) triples reported across a set of JSON reports."""
    reported = set()
    sources = set()
    for path in report_paths:
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
        source = payload["source"]
        sources.add(source)
        for violation in payload["violations"]:
            reported.add((source, violation["rule"], violation["path"]))
    return reported, sources


def score(report_paths, gold_path):
    """Per-rule effectiveness against a JSONL gold-label file.

    A reported violation matches a gold label on (file, rule, path).
    Reported violations without any gold label are unlabeled and excluded;
    only labels with expected=false turn a report into a false positive.
    """
    gold = load_gold(gold_path)
    reported, sources = load_reported(report_paths)
    missing = {label.file for label in gold} - sources
    if missing:
        raise ValueError(f"gold files never analyzed: {sorted(missing)}")

    tallies = {}
    for label in gold:
        rule = tallies.setdefault(label.rule_id, {"tp": 0, "fp": 0, "fn": 0})
        hit = (label.file, label.rule_id, label.path_template) in reported
        if label.expected and hit:
            rule["tp"] += 1
        elif label.expected and not hit:
            rule["fn"] += 1
        elif not label.expected and hit:
            rule["fp"] += 1

    return [
        EffectivenessScore(rule_id=rule_id, true_positives=t["tp"],
                           false_positives=t["fp"], false_negatives=t["fn"])
        for rule_id, t in sorted(tallies.items())
    ]


def write_scores_csv(scores, path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["rule_id", "tp", "fp", "fn", "precision", "recall"])
        for s in scores:
            writer.writerow([
                s.rule_id, s.true_positives, s.false_positives, s.false_negatives,
                "" if s.precision is None else f"{s.precision:.4f}",
                "" if s.recall is None else f"{s.recall:.4f}",
            ])


def perf_summary(records):
    """Markdown table of per-bucket medians plus a scaling sanity flag."""
    lines = [
        "| Size bucket | Median duration (ms) | Median paths | Median peak memory (MB) | Files |",
        "| --- | --- | --- | --- | --- |",
    ]
    medians = []
    for name, _low, _high in BUCKETS:
        bucket = [r for r in records if r.size_bucket == name]
        if not bucket:
            lines.append(f"| {name} | n/a | n/a | n/a | 0 |")
            medians.append(None)
            continue
        duration = statistics.median(r.duration_ms for r in bucket)
        paths = statistics.median(r.path_count for r in bucket)
        memory = statistics.median(r.peak_memory_bytes for r in bucket) / 1e6
        lines.append(f"| {name} | {duration:.1f} | {paths:g} | {memory:.0f} "
                     f"| {len(bucket)} |")
        medians.append(duration)
    flagged = [m for m in medians if m is not None]
    if any(b < a for a, b in zip(flagged, flagged[1:])):
        lines.append("")
        lines.append("Note: a larger bucket shows a smaller median duration.")
    return "\n".join(lines) + "\n"
