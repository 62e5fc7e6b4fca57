"""Command-line entry point.

Usage:
  api-ruler <input> [--rules id,id,...] [--interactive] [--out <file.md>]
            [--json <file.json>] [--threshold <f>] [--dict standard|large]
            [--max-bytes <n>]
  api-ruler classifier train --corpus <csv> --out <model.json> [--alpha f] [--seed n]
  api-ruler classifier eval --corpus <csv> [--folds n] [--seed n]
  api-ruler bench run <dir> [--out results.csv] [--reports-dir <dir>]
  api-ruler bench score --reports <dir> --gold gold.jsonl [--out scores.csv]

Exit codes for analysis runs: 0 = clean, 1 = violations found,
2 = usage/input/parse error.
"""

from __future__ import annotations

import argparse
import glob
import os
import sys
import urllib.error
import urllib.request

from . import bench as bench_mod
from . import classifier as nb
from .engine import AnalysisConfig, analyze_source
from .errors import ApiRulerError, DocumentTooLarge
from .report import render_console, render_json, render_markdown
from .rules import ALL_RULE_IDS, RULES

EXIT_CLEAN = 0
EXIT_VIOLATIONS = 1
EXIT_ERROR = 2

FETCH_TIMEOUT_SECONDS = 30


def fetch_remote(url, max_bytes, timeout=FETCH_TIMEOUT_SECONDS):
    """Download an http/https document, capped at max_bytes."""
    request = urllib.request.Request(url, headers={"User-Agent": "api-ruler"})
    with urllib.request.urlopen(request, timeout=timeout) as response:
        status = getattr(response, "status", 200)
        if not 200 <= status < 300:
            raise ApiRulerError(f"unexpected HTTP status {status} for {url}")
        data = response.read(max_bytes + 1)
    if len(data) > max_bytes:
        raise DocumentTooLarge(f"remote document exceeds cap of {max_bytes} bytes")
    return data


def _read_input(target, max_bytes):
    if target.startswith(("http://", "https://")):
        return fetch_remote(target, max_bytes)
    with open(target, "rb") as fh:
        return fh.read()


def _select_rules_interactively(stream_in=None, stream_out=None):
    stream_in = stream_in or sys.stdin
    stream_out = stream_out or sys.stdout
    if not stream_in.isatty():
        raise ApiRulerError("--interactive requires a terminal")
    selected = []
    for rule in RULES:
        stream_out.write(f"Enable {rule.id}? ({rule.title}) [Y/n] ")
        stream_out.flush()
        answer = stream_in.readline().strip().lower()
        if answer in ("", "y", "yes"):
            selected.append(rule.id)
    return selected


def _build_analysis_parser():
    parser = argparse.ArgumentParser(
        prog="api-ruler",
        description="Detect RESTful design-rule violations in OpenAPI documents.",
    )
    parser.add_argument("input", help="path or http(s) URL of the OpenAPI document")
    parser.add_argument("--rules", help="comma-separated rule ids to enable")
    parser.add_argument("--interactive", action="store_true",
                        help="select rules interactively")
    parser.add_argument("--out", help="write a Markdown report to this file")
    parser.add_argument("--json", dest="json_out",
                        help="write a JSON report to this file")
    parser.add_argument("--threshold", type=float, default=0.7,
                        help="tunneling-detection confidence threshold")
    parser.add_argument("--dict", dest="dictionary", default="standard",
                        choices=["standard", "large"], help="dictionary profile")
    parser.add_argument("--max-bytes", type=int, default=20 * 1024 * 1024,
                        help="maximum document size in bytes")
    return parser


def _run_analysis(argv):
    parser = _build_analysis_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit:
        return EXIT_ERROR

    if args.rules and args.interactive:
        print("error: --rules and --interactive are mutually exclusive",
              file=sys.stderr)
        return EXIT_ERROR

    try:
        if args.interactive:
            rule_ids = _select_rules_interactively()
        elif args.rules:
            rule_ids = [r.strip() for r in args.rules.split(",") if r.strip()]
            unknown = set(rule_ids) - set(ALL_RULE_IDS)
            if unknown:
                raise ApiRulerError(f"unknown rule id: {', '.join(sorted(unknown))}")
        else:
            rule_ids = list(ALL_RULE_IDS)

        config = AnalysisConfig(
            enabled_rules=frozenset(rule_ids),
            tunnel_threshold=args.threshold,
            dictionary_profile=args.dictionary,
            max_document_bytes=args.max_bytes,
            classifier_model_path=os.environ.get("API_RULER_MODEL"),
        )
        data = _read_input(args.input, args.max_bytes)
        report = analyze_source(data, args.input, config)
    except (ApiRulerError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (OSError, urllib.error.URLError) as exc:
        print(f"error: cannot read {args.input}: {exc}", file=sys.stderr)
        return EXIT_ERROR

    print(render_console(report).content, end="")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(render_markdown(report).content)
    if args.json_out:
        with open(args.json_out, "w", encoding="utf-8") as fh:
            fh.write(render_json(report).content)
    return EXIT_VIOLATIONS if report.violations else EXIT_CLEAN


def _run_classifier(argv):
    parser = argparse.ArgumentParser(prog="api-ruler classifier")
    sub = parser.add_subparsers(dest="command", required=True)

    train_p = sub.add_parser("train", help="train a verb-prediction model")
    train_p.add_argument("--corpus", required=True)
    train_p.add_argument("--out", required=True)
    train_p.add_argument("--alpha", type=float, default=1.0)
    train_p.add_argument("--seed", type=int, default=0)

    eval_p = sub.add_parser("eval", help="cross-validate on a corpus")
    eval_p.add_argument("--corpus", required=True)
    eval_p.add_argument("--folds", type=int, default=10)
    eval_p.add_argument("--seed", type=int, default=0)

    try:
        args = parser.parse_args(argv)
    except SystemExit:
        return EXIT_ERROR

    try:
        samples = nb.load_corpus(args.corpus)
        if args.command == "train":
            model = nb.train(samples, alpha=args.alpha)
            nb.save_model(model, args.out)
            print(f"trained on {len(samples)} samples, "
                  f"|V|={len(model.vocabulary)}, saved to {args.out}")
        else:
            accuracy, per_fold = nb.cross_validate(samples, args.folds,
                                                   seed=args.seed)
            for i, fold in enumerate(per_fold, start=1):
                print(f"fold {i}: {fold:.4f}")
            print(f"mean accuracy: {accuracy:.4f}")
    except (ApiRulerError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_CLEAN


def _run_bench(argv):
    parser = argparse.ArgumentParser(prog="api-ruler bench")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="analyze a corpus directory")
    run_p.add_argument("directory")
    run_p.add_argument("--out", help="write records CSV here")
    run_p.add_argument("--reports-dir", help="write per-file JSON reports here")

    score_p = sub.add_parser("score", help="score reports against gold labels")
    score_p.add_argument("--reports", required=True,
                         help="directory of *.report.json files")
    score_p.add_argument("--gold", required=True, help="JSONL gold-label file")
    score_p.add_argument("--out", help="write scores CSV here")

    try:
        args = parser.parse_args(argv)
    except SystemExit:
        return EXIT_ERROR

    try:
        if args.command == "run":
            records = bench_mod.run_corpus(args.directory, out_csv=args.out,
                                           reports_dir=args.reports_dir)
            rate = bench_mod.success_rate(records)
            print(f"analyzed {len(records)} files, success rate {rate:.3f}")
            print(bench_mod.perf_summary(records), end="")
        else:
            report_paths = sorted(
                glob.glob(os.path.join(args.reports, "*.report.json")))
            scores = bench_mod.score(report_paths, args.gold)
            for s in scores:
                precision = "n/a" if s.precision is None else f"{s.precision:.3f}"
                recall = "n/a" if s.recall is None else f"{s.recall:.3f}"
                print(f"{s.rule_id}: TP={s.true_positives} FP={s.false_positives} "
                      f"FN={s.false_negatives} precision={precision} recall={recall}")
            if args.out:
                bench_mod.write_scores_csv(scores, args.out)
    except (ApiRulerError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_CLEAN


def main(argv=None):
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    if argv and argv[0] == "classifier":
        return _run_classifier(argv[1:])
    if argv and argv[0] == "bench":
        return _run_bench(argv[1:])
    return _run_analysis(argv)


if __name__ == "__main__":
    sys.exit(main())
