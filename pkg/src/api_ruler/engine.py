"""Analysis orchestration: run the configured rule set over a document."""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .errors import AnalysisAborted
from .lexicon import default_lexicon
from .model import map_lines, parse_document
from .rules import ALL_RULE_IDS, CHECKERS, RULES_BY_ID, RuleServices


@dataclass(frozen=True)
class AnalysisConfig:
    enabled_rules: frozenset = frozenset(ALL_RULE_IDS)
    tunnel_threshold: float = 0.7
    dictionary_profile: str = "standard"
    max_document_bytes: int = 20 * 1024 * 1024
    classifier_model_path: str | None = None
    concurrent: bool = False

    def __post_init__(self):
        if not self.enabled_rules:
            raise ValueError("enabled_rules must not be empty")
        unknown = set(self.enabled_rules) - set(ALL_RULE_IDS)
        if unknown:
            raise ValueError(f"unknown rule id(s): {', '.join(sorted(unknown))}")
        if not 0 < self.tunnel_threshold <= 1:
            raise ValueError("tunnel_threshold must be in (0, 1]")
        if self.dictionary_profile not in ("standard", "large"):
            raise ValueError("dictionary_profile must be 'standard' or 'large'")
        if self.max_document_bytes <= 0:
            raise ValueError("max_document_bytes must be positive")

    def with_rules(self, rule_ids):
        return AnalysisConfig(
            enabled_rules=frozenset(rule_ids),
            tunnel_threshold=self.tunnel_threshold,
            dictionary_profile=self.dictionary_profile,
            max_document_bytes=self.max_document_bytes,
            classifier_model_path=self.classifier_model_path,
            concurrent=self.concurrent,
        )


@dataclass
class Report:
    source_name: str
    started_at: float
    finished_at: float
    violations: list
    counts_by_rule: dict
    rules_run: list
    errors: list = field(default_factory=list)
    rule_durations: dict = field(default_factory=dict)  # rule id -> seconds


def _violation_sort_key(violation):
    return (violation.line, violation.rule_id, violation.path_template,
            violation.method or "", violation.message)


def analyze(document, config=AnalysisConfig()):
    """Run exactly the enabled checkers and assemble a deterministic report.

    Violations are ordered by line, then rule id, then path, regardless of
    whether the checkers ran serially or concurrently.
    """
    started = time.time()
    services = RuleServices(
        lexicon=default_lexicon(config.dictionary_profile),
        tunnel_threshold=config.tunnel_threshold,
        classifier_model_path=config.classifier_model_path,
    )
    enabled = [rule_id for rule_id in ALL_RULE_IDS if rule_id in config.enabled_rules]

    def run_one(rule_id):
        t0 = time.perf_counter()
        found = CHECKERS[rule_id](document, services)
        return rule_id, found, time.perf_counter() - t0

    results = []
    if config.concurrent and len(enabled) > 1:
        with ThreadPoolExecutor(max_workers=min(8, len(enabled))) as pool:
            results = list(pool.map(run_one, enabled))
    else:
        results = [run_one(rule_id) for rule_id in enabled]

    violations = []
    durations = {}
    counts = {rule_id: 0 for rule_id in enabled}
    for rule_id, found, elapsed in results:
        durations[rule_id] = elapsed
        counts[rule_id] = len(found)
        violations.extend(found)
    violations.sort(key=_violation_sort_key)

    return Report(
        source_name=document.source_name,
        started_at=started,
        finished_at=time.time(),
        violations=violations,
        counts_by_rule=counts,
        rules_run=[RULES_BY_ID[rule_id] for rule_id in enabled],
        errors=list(document.warnings),
        rule_durations=durations,
    )


def analyze_source(data, source_name, config=AnalysisConfig()):
    """parse -> map lines -> analyze; parse errors propagate to the caller."""
    document = parse_document(data, source_name, max_bytes=config.max_document_bytes)
    document = map_lines(data, document)
    return analyze(document, config)
