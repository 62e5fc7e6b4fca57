"""Acceptance suite.

One test per criterion; each prints a single PASS/FAIL line (visible even
under output capture) in addition to the normal pytest verdict.
"""

import json
import math
import pathlib
import random
import resource
import statistics
import time

import pytest

from api_ruler.bench import run_corpus, score, success_rate
from api_ruler.classifier import (
    LabeledSample,
    predict,
    preprocess,
    cross_validate,
    train,
)
from api_ruler.cli import EXIT_CLEAN, EXIT_ERROR, EXIT_VIOLATIONS, main
from api_ruler.engine import AnalysisConfig, analyze_source
from api_ruler.lexicon import Dictionary, _chunk_cost, segment
from api_ruler.report import render_console, render_json, render_markdown
from api_ruler.rules import ALL_RULE_IDS

FIXTURES = pathlib.Path(__file__).parent / "fixtures"
RULE_FIXTURES = FIXTURES / "rules"
GOLD = RULE_FIXTURES / "gold.jsonl"


def announce(capsys, label, body):
    try:
        detail = body()
    except BaseException:
        with capsys.disabled():
            print(f"[acceptance] FAIL {label}")
        raise
    with capsys.disabled():
        print(f"[acceptance] PASS {label}" + (f" ({detail})" if detail else ""))


@pytest.fixture(scope="module")
def fixture_scores(tmp_path_factory):
    """Analyze the per-rule fixture corpus once and score it against gold."""
    reports_dir = tmp_path_factory.mktemp("reports")
    started = time.perf_counter()
    run_corpus(RULE_FIXTURES, reports_dir=reports_dir)
    report_paths = sorted(reports_dir.glob("*.report.json"))
    scores = {s.rule_id: s for s in score(report_paths, GOLD)}
    elapsed = time.perf_counter() - started
    return scores, elapsed


def test_criterion_1_trivially_detectable_rules_are_perfect(fixture_scores, capsys):
    def body():
        scores, elapsed = fixture_scores
        for rule_id in ("NoUnderscores", "Lowercase", "NoTrailingSlash"):
            s = scores[rule_id]
            assert s.precision == 1.0, rule_id
            assert s.recall == 1.0, rule_id
            assert s.true_positives >= 5, rule_id
        assert elapsed < 5.0
        return f"3 rules at precision=recall=1.0 in {elapsed:.2f}s"
    announce(capsys, "criterion 1: trivially detectable rules", body)


def test_criterion_2_all_rules_effective_on_fixtures(fixture_scores, capsys):
    def body():
        scores, _ = fixture_scores
        assert set(scores) == set(ALL_RULE_IDS)
        worst_p = worst_r = 1.0
        for rule_id in ALL_RULE_IDS:
            s = scores[rule_id]
            assert s.precision is not None and s.precision >= 0.8, rule_id
            assert s.recall is not None and s.recall >= 0.8, rule_id
            worst_p = min(worst_p, s.precision)
            worst_r = min(worst_r, s.recall)
        return f"14 rules, worst precision {worst_p:.2f}, worst recall {worst_r:.2f}"
    announce(capsys, "criterion 2: per-rule fixture effectiveness", body)


ORACLE_WORDS = [
    "the", "user", "users", "order", "orders", "item", "items", "account",
    "accounts", "application", "payment", "payments", "method", "methods",
    "product", "products", "category", "categories", "profile", "profiles",
    "address", "addresses", "data", "export", "import", "report", "reports",
    "image", "images", "file", "files", "group", "groups", "member",
    "members", "session", "sessions", "token", "tokens", "cart", "carts",
    "shop", "shops", "invoice", "invoices", "status", "history", "search",
    "detail", "details",
]


def _enumerated_min_cost(token, dictionary):
    n = len(token)
    best = [math.inf]

    def rec(i, acc):
        if acc >= best[0]:
            return
        if i == n:
            best[0] = acc
            return
        for j in range(i + 1, n + 1):
            rec(j, acc + _chunk_cost(token[i:j], dictionary))

    rec(0, 0.0)
    return best[0]


def test_criterion_3_segmentation_matches_exhaustive_oracle(capsys):
    def body():
        dictionary = Dictionary.from_words("oracle", ORACLE_WORDS, ranked=True)
        assert len(dictionary) == 50
        rng = random.Random(42)
        tokens = []
        for _ in range(40):  # concatenated dictionary words
            tokens.append("".join(rng.choices(ORACLE_WORDS, k=rng.randint(1, 3)))[:20])
        for _ in range(20):  # random letter noise
            tokens.append("".join(rng.choices("abcdefghijklmnopqrstuvwxyz",
                                              k=rng.randint(1, 20))))
        for _ in range(20):  # word + junk mixtures
            tokens.append((rng.choice(ORACLE_WORDS)
                           + "".join(rng.choices("xqzj", k=rng.randint(1, 6))))[:20])
        started = time.perf_counter()
        for token in tokens:
            assert len(token) <= 20
            got = segment(token, dictionary).search_cost
            expected = _enumerated_min_cost(token, dictionary)
            assert got == expected, token  # exact, zero tolerance
        elapsed = time.perf_counter() - started
        assert elapsed < 60.0
        return f"{len(tokens)} tokens in {elapsed:.1f}s"
    announce(capsys, "criterion 3: segmentation oracle", body)


CLASSIFIER_WORDS = ["zog", "mib", "kex", "vun", "tral", "pem", "dorf", "quil"]
HTTP_LABELS = ["GET", "POST", "PUT", "PATCH", "DELETE", "INVALID"]


def _brute_force_posterior(samples, alpha, text):
    labels = sorted({s.label for s in samples})
    vocab = sorted({t for s in samples for t in preprocess(s.text)})
    counts = {l: {} for l in labels}
    doc_counts = {l: 0 for l in labels}
    for s in samples:
        doc_counts[s.label] += 1
        for t in preprocess(s.text):
            counts[s.label][t] = counts[s.label].get(t, 0) + 1
    scores = {}
    for label in labels:
        total = sum(counts[label].values())
        p = doc_counts[label] / len(samples)
        for token in preprocess(text):
            if token in vocab:
                p *= (counts[label].get(token, 0) + alpha) / (total + alpha * len(vocab))
        scores[label] = p
    norm = sum(scores.values())
    return {label: s / norm for label, s in scores.items()}


def test_criterion_4_classifier_oracle_and_cv(capsys):
    def body():
        rng = random.Random(7)
        checked = 0
        for _ in range(200):
            labels = rng.sample(HTTP_LABELS, rng.randint(2, 4))
            samples = [
                LabeledSample(
                    text=" ".join(rng.choices(CLASSIFIER_WORDS, k=rng.randint(1, 5))),
                    label=label)
                for label in labels for _ in range(rng.randint(1, 3))
            ]
            alpha = rng.choice([0.1, 0.3, 1.0, 2.0])
            model = train(samples, alpha=alpha)
            text = " ".join(rng.choices(CLASSIFIER_WORDS + ["oov"], k=rng.randint(0, 6)))
            expected = _brute_force_posterior(samples, alpha, text)
            got = predict(model, text).posterior
            for label in expected:
                assert abs(got[label] - expected[label]) <= 1e-9
            checked += 1
        assert checked == 200

        separable = [
            LabeledSample(text=f"{word} {word} tral", label=label)
            for label, word in [("GET", "zog"), ("POST", "mib"),
                                ("PUT", "kex"), ("DELETE", "vun")]
            for _ in range(10)
        ]
        accuracy, _ = cross_validate(separable, 10, seed=1)
        assert accuracy == 1.0
        return "200 random models within 1e-9; 10-fold CV accuracy 1.0"
    announce(capsys, "criterion 4: classifier oracle", body)


VALID_TEMPLATE = """\
openapi: 3.0.0
paths:
  /users{i}:
    get:
      summary: List users
      description: Returns the list of users.
      responses:
        "200": {{description: ok, content: {{application/json: {{}}}}}}
"""


def test_criterion_5_robustness_over_mixed_corpus(tmp_path, capsys):
    def body():
        corpus = tmp_path / "corpus"
        corpus.mkdir()
        for i in range(94):
            (corpus / f"valid{i:03d}.yaml").write_text(VALID_TEMPLATE.format(i=i))
        (corpus / "bad_yaml.yaml").write_text("key: [unclosed\n  nested: {")
        (corpus / "bad_json.json").write_text("{not json at all")
        (corpus / "empty.yaml").write_text("")
        (corpus / "binary.yaml").write_bytes(b"\x00\x01\x02\xff\xfe binary junk")
        (corpus / "no_version.yaml").write_text("info: {title: t}\npaths: {}\n")
        (corpus / "oversize.yaml").write_text(
            VALID_TEMPLATE.format(i=999) + "# " + "x" * 4096 + "\n")

        config = AnalysisConfig(max_document_bytes=2048)
        records = run_corpus(corpus, config)
        assert len(records) == 100
        non_success = [r for r in records if r.outcome != "Success"]
        assert len(non_success) == 6
        assert {r.file: r.outcome for r in non_success} == {
            "bad_yaml.yaml": "ParseError",
            "bad_json.json": "ParseError",
            "empty.yaml": "ParseError",
            "binary.yaml": "ParseError",
            "no_version.yaml": "ParseError",
            "oversize.yaml": "Aborted",
        }
        assert success_rate(records) == 0.94
        return "100 files, 6 non-Success, success rate 0.94"
    announce(capsys, "criterion 5: robustness", body)


def _synthetic_doc(path_count):
    lines = ["openapi: 3.0.0", "paths:"]
    for i in range(path_count):
        lines.append(f"  /applicationusers{i}/{{id}}/paymentmethods:")
        lines.append("    get:")
        lines.append("      summary: List payment methods")
        lines.append("      description: Returns the list of payment methods.")
        lines.append("      responses:")
        lines.append('        "200": {description: ok, content: {application/json: {}}}')
    return "\n".join(lines) + "\n"


def test_criterion_6_performance_scaling(capsys):
    def body():
        medians = []
        for count in (10, 50, 200):
            text = _synthetic_doc(count)
            timings = []
            for _ in range(5):
                t0 = time.perf_counter()
                analyze_source(text, f"synthetic-{count}")
                timings.append(time.perf_counter() - t0)
            medians.append(statistics.median(timings))
        assert medians == sorted(medians), medians
        assert medians[-1] < 60.0

        analyze_source(_synthetic_doc(500), "synthetic-500")
        peak = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss * 1024
        assert peak < 2 * 1024 ** 3
        return (f"medians {', '.join(f'{m * 1000:.0f}ms' for m in medians)}; "
                f"peak memory {peak / 1e6:.0f}MB")
    announce(capsys, "criterion 6: performance scaling", body)


def _render_all(concurrent):
    config = AnalysisConfig(concurrent=concurrent)
    outputs = []
    for path in sorted(RULE_FIXTURES.glob("*.yaml")) + [FIXTURES / "clean.yaml"]:
        report = analyze_source(path.read_text(), path.name, config)
        # Timestamps vary run to run by nature; normalize them so the
        # comparison covers every analysis-derived byte.
        report.started_at = 0.0
        report.finished_at = 0.0
        outputs.append(render_console(report).content.encode())
        outputs.append(render_markdown(report).content.encode())
        outputs.append(render_json(report).content.encode())
    return outputs


def test_criterion_7_deterministic_output(capsys):
    def body():
        first = _render_all(concurrent=False)
        second = _render_all(concurrent=False)
        concurrent = _render_all(concurrent=True)
        assert first == second
        assert first == concurrent
        return f"{len(first)} rendered outputs byte-identical, serial and concurrent"
    announce(capsys, "criterion 7: determinism", body)


def test_criterion_8_exit_code_contract(tmp_path, capsys):
    def body():
        clean = tmp_path / "clean.yaml"
        clean.write_text("""\
openapi: 3.0.0
paths:
  /users:
    get:
      summary: List users
      description: Returns the list of users.
      responses:
        "200": {description: ok, content: {application/json: {}}}
""")
        dirty = tmp_path / "dirty.yaml"
        dirty.write_text("""\
openapi: 3.0.0
paths:
  /my_users:
    get:
      responses:
        "200": {description: ok, content: {application/json: {}}}
""")
        broken = tmp_path / "broken.yaml"
        broken.write_text("{broken: [")
        empty = tmp_path / "empty.yaml"
        empty.write_text("")

        matrix = [
            ([str(clean)], EXIT_CLEAN),
            ([str(clean), "--rules", "Lowercase,NoUnderscores"], EXIT_CLEAN),
            ([str(dirty), "--rules", "Lowercase"], EXIT_CLEAN),
            ([str(dirty)], EXIT_VIOLATIONS),
            ([str(dirty), "--rules", "NoUnderscores"], EXIT_VIOLATIONS),
            ([str(dirty), "--json", str(tmp_path / "r.json")], EXIT_VIOLATIONS),
            ([str(tmp_path / "missing.yaml")], EXIT_ERROR),
            ([str(broken)], EXIT_ERROR),
            ([str(empty)], EXIT_ERROR),
            ([str(clean), "--rules", "NotARule"], EXIT_ERROR),
            ([str(clean), "--rules", "Lowercase", "--interactive"], EXIT_ERROR),
            ([str(clean), "--max-bytes", "10"], EXIT_ERROR),
        ]
        assert len(matrix) == 12
        for argv, expected in matrix:
            assert main(argv) == expected, argv
        return "12-case matrix covers exit codes 0, 1, and 2"
    announce(capsys, "criterion 8: exit-code contract", body)
