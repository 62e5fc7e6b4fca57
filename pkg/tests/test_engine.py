"""Analysis engine tests: configuration, enablement, ordering, concurrency."""

import pytest

from api_ruler.engine import AnalysisConfig, analyze, analyze_source
from api_ruler.errors import UnparsableDocument
from api_ruler.model import map_lines, parse_document
from api_ruler.rules import ALL_RULE_IDS

MIXED = """\
openapi: 3.0.0
paths:
  /my_users/:
    get:
      responses:
        "200": {description: ok}
  /getUsers:
    get:
      responses:
        "200": {description: ok, content: {application/json: {}}}
  /Users:
    get:
      responses:
        "200": {description: ok, content: {application/json: {}}}
"""


def analyze_mixed(config=AnalysisConfig()):
    return analyze_source(MIXED, "mixed.yaml", config)


def test_clean_fixture_has_no_violations(fixtures_dir):
    data = (fixtures_dir / "clean.yaml").read_text()
    report = analyze_source(data, "clean.yaml")
    assert report.violations == []
    assert all(count == 0 for count in report.counts_by_rule.values())


class TestConfigValidation:
    def test_empty_rules(self):
        with pytest.raises(ValueError):
            AnalysisConfig(enabled_rules=frozenset())

    def test_unknown_rule(self):
        with pytest.raises(ValueError):
            AnalysisConfig(enabled_rules=frozenset(["NotARule"]))

    def test_threshold_bounds(self):
        with pytest.raises(ValueError):
            AnalysisConfig(tunnel_threshold=0.0)
        with pytest.raises(ValueError):
            AnalysisConfig(tunnel_threshold=1.5)
        AnalysisConfig(tunnel_threshold=1.0)  # inclusive upper bound

    def test_dictionary_profile(self):
        with pytest.raises(ValueError):
            AnalysisConfig(dictionary_profile="huge")

    def test_max_bytes(self):
        with pytest.raises(ValueError):
            AnalysisConfig(max_document_bytes=0)

    def test_with_rules_preserves_other_settings(self):
        config = AnalysisConfig(tunnel_threshold=0.9, concurrent=True)
        sub = config.with_rules(["Lowercase"])
        assert sub.enabled_rules == frozenset(["Lowercase"])
        assert sub.tunnel_threshold == 0.9
        assert sub.concurrent


class TestEnablement:
    def test_only_enabled_rules_run(self):
        report = analyze_mixed(AnalysisConfig().with_rules(["Lowercase"]))
        assert set(report.counts_by_rule) == {"Lowercase"}
        assert [r.id for r in report.rules_run] == ["Lowercase"]
        assert {v.rule_id for v in report.violations} == {"Lowercase"}

    def test_all_rules_default(self):
        report = analyze_mixed()
        assert set(report.counts_by_rule) == set(ALL_RULE_IDS)
        assert report.counts_by_rule["NoUnderscores"] == 1
        assert report.counts_by_rule["NoTrailingSlash"] == 1
        assert report.counts_by_rule["NoCRUDNames"] == 1
        assert report.counts_by_rule["Lowercase"] == 2  # /getUsers and /Users
        assert report.counts_by_rule["ContentType"] == 1

    def test_full_run_is_union_of_single_rule_runs(self):
        full = {(v.rule_id, v.path_template, v.message)
                for v in analyze_mixed().violations}
        union = set()
        for rule_id in ALL_RULE_IDS:
            report = analyze_mixed(AnalysisConfig().with_rules([rule_id]))
            union |= {(v.rule_id, v.path_template, v.message)
                      for v in report.violations}
        assert full == union


class TestOrderingAndConcurrency:
    def test_violations_are_sorted(self):
        report = analyze_mixed()
        keys = [(v.line, v.rule_id, v.path_template, v.method or "", v.message)
                for v in report.violations]
        assert keys == sorted(keys)

    def test_serial_equals_concurrent(self):
        serial = analyze_mixed(AnalysisConfig(concurrent=False))
        concurrent = analyze_mixed(AnalysisConfig(concurrent=True))
        assert serial.violations == concurrent.violations
        assert serial.counts_by_rule == concurrent.counts_by_rule

    def test_repeat_runs_identical(self):
        assert analyze_mixed().violations == analyze_mixed().violations


class TestReportAssembly:
    def test_counts_match_violations(self):
        report = analyze_mixed()
        for rule_id, count in report.counts_by_rule.items():
            assert count == sum(1 for v in report.violations if v.rule_id == rule_id)

    def test_lines_are_mapped(self):
        report = analyze_mixed()
        underscored = [v for v in report.violations if v.rule_id == "NoUnderscores"]
        assert underscored[0].line == 3

    def test_document_warnings_carried_over(self):
        text = """\
openapi: 3.0.0
paths:
  /a:
    get:
      responses:
        "200": {$ref: "#/components/responses/Missing"}
"""
        report = analyze_source(text, "t")
        assert any("Missing" in w for w in report.errors)

    def test_rule_durations_recorded(self):
        report = analyze_mixed()
        assert set(report.rule_durations) == set(ALL_RULE_IDS)
        assert all(d >= 0 for d in report.rule_durations.values())

    def test_parse_errors_propagate(self):
        with pytest.raises(UnparsableDocument):
            analyze_source("{broken", "t")

    def test_analyze_accepts_premapped_document(self):
        document = map_lines(MIXED, parse_document(MIXED, "t"))
        report = analyze(document)
        assert report.source_name == "t"
        assert report.violations
