"""Command-line pipeline: analyze one app, a corpus, or train the MLP.

Exit codes: 0 analysis completed (inconsistencies included), 1 usage
error, 2 I/O-level failure. MCDS_DICT_DIR overrides the bundled lexicon
directory when --dict-dir is not given.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

from .consistency import compare, compare_projections
from .ddg import build_ddg
from .errors import (FatalSyntaxError, MalformedMarkup, McdsError,
                     MissingEntry, UnreadableFile)
from .estree import import_estree  # re-exported interchange surface
from .ingest import load_package, parse_layout
from .jsparser import parse_js
from .lexicon import default_dict_dir, load_lexicons
from .policy.classifier import MlpModel, RuleClassifier, train_mlp
from .policy.extract import extract_tuples
from .policy.similarity import METHODS, SimilarityConfig
from .policy.synth import generate_corpus, read_corpus, write_corpus
from .policy.text import build_vocabulary, split_sentences
from .report import AppReport, CorpusSummary
from .scopes import build_scope_chain
from .taint import (find_flows, flows_to_practices, load_sink_table,
                    load_source_table, resolve_ui_sources)

__all__ = ["AnalyzeOptions", "analyze_app", "analyze_corpus", "main",
           "import_estree"]


class UsageError(Exception):
    pass


@dataclass
class AnalyzeOptions:
    dict_dir: Path = field(default_factory=default_dict_dir)
    sources_path: Optional[Path] = None
    sinks_path: Optional[Path] = None
    similarity_method: str = "overlap"
    similarity_threshold: float = 1.0
    classifier: str = "rule"  # rule | mlp
    model_path: Optional[Path] = None
    out_dir: Optional[Path] = None
    output_format: str = "json"  # json | csv
    jobs: int = 1


def _load_shared(options: AnalyzeOptions):
    type_lexicon, operation_lexicon = load_lexicons(options.dict_dir)
    sources = load_source_table(options.sources_path, type_lexicon)
    sinks = load_sink_table(options.sinks_path)
    return type_lexicon, operation_lexicon, sources, sinks


def analyze_app(root, policy: Optional[Path] = None,
                options: Optional[AnalyzeOptions] = None) -> AppReport:
    """Run the whole pipeline over one unpacked mini-app directory."""
    options = options or AnalyzeOptions()
    type_lexicon, operation_lexicon, sources, sinks = _load_shared(options)

    package = load_package(root, options.dict_dir)
    report = AppReport(app_id=Path(root).name)
    report.policy_files = list(package.policy_files)
    for warning in package.warnings:
        report.diagnostics.append({"code": "ingest", "message": warning,
                                   "where": package.root_path})

    for page in package.pages:
        report.pages.append(page.page_id)
        chain = None
        if page.logic_source is not None:
            file_id = f"{page.page_id}.js"
            try:
                ast = parse_js(page.logic_source)
            except FatalSyntaxError as err:
                report.diagnostics.append({
                    "code": "fatal-syntax",
                    "message": str(err),
                    "where": file_id,
                })
                ast = None
            except RecursionError:
                report.diagnostics.append({
                    "code": "fatal-syntax",
                    "message": "nesting too deep to analyze",
                    "where": file_id,
                })
                ast = None
            if ast is not None:
                for diag in ast.info.get("diagnostics", []):
                    report.diagnostics.append({
                        "code": "parse",
                        "message": diag["message"],
                        "where": f"{file_id}:{diag['line']}",
                    })
                chain = build_scope_chain(ast, file_id)

        ui_sources = []
        if page.layout_source is not None and chain is not None:
            try:
                layout = parse_layout(page.layout_source)
                ui_sources, ui_diags = resolve_ui_sources(
                    layout, chain, type_lexicon, page.page_id)
                report.diagnostics.extend(ui_diags)
            except MalformedMarkup as err:
                report.diagnostics.append({
                    "code": "malformed-markup",
                    "message": str(err),
                    "where": f"{page.page_id}.wxml",
                })

        if chain is None:
            continue
        graph = build_ddg(chain)
        for diag in graph.diagnostics:
            report.diagnostics.append({
                "code": "dataflow",
                "message": diag.message,
                "where": f"{chain.file_id}:{diag.line}",
            })
        flows = find_flows(graph, sources, ui_sources, sinks)
        report.flows.extend(flows)
        report.code_practices |= flows_to_practices(flows)

    policy_text = None
    if policy is not None:
        try:
            policy_text = Path(policy).read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as err:
            raise UnreadableFile(policy, str(err)) from err
        report.policy_files = [str(policy)]
    elif package.policy_text is not None:
        policy_text = package.policy_text

    if policy_text is not None:
        report.policy_practices = _extract_policy_practices(
            policy_text, type_lexicon, operation_lexicon, options)
    # a missing policy is compared as the empty practice set

    report.consistency = compare(report.code_practices,
                                 report.policy_practices)
    report.projections = compare_projections(report.code_practices,
                                             report.policy_practices)
    return report


def _extract_policy_practices(policy_text, type_lexicon, operation_lexicon,
                              options: AnalyzeOptions):
    vocabulary = build_vocabulary(type_lexicon, operation_lexicon)
    if options.classifier == "mlp":
        if options.model_path is None:
            raise UsageError("--classifier mlp needs --model FILE")
        model = MlpModel.load(options.model_path)
    else:
        model = RuleClassifier(vocabulary)
    cfg = SimilarityConfig(options.similarity_method,
                           options.similarity_threshold)
    practices = set()
    for record in split_sentences(policy_text):
        record.vector = vocabulary.vector(record.text)
        record.related = bool(model.classify_vector(record.vector))
        if record.related:
            practices |= extract_tuples(record, type_lexicon,
                                        operation_lexicon, cfg)
    return practices


# -- corpus -----------------------------------------------------------------


def _analyze_one(args: tuple) -> tuple[str, Optional[dict], Optional[str]]:
    app_dir, options = args
    app_id = Path(app_dir).name
    try:
        report = analyze_app(app_dir, None, options)
        return app_id, report.to_dict(), None
    except McdsError as err:
        return app_id, None, str(err)
    except Exception as err:  # a single hostile app must not sink the corpus
        return app_id, None, f"{type(err).__name__}: {err}"


def analyze_corpus(corpus_dir, options: Optional[AnalyzeOptions] = None,
                   ) -> tuple[CorpusSummary, list[dict]]:
    """Analyze every subdirectory; per-app failures never abort the run."""
    options = options or AnalyzeOptions()
    corpus_dir = Path(corpus_dir)
    if not corpus_dir.is_dir():
        raise MissingEntry(f"{corpus_dir} is not a directory")
    app_dirs = sorted(p for p in corpus_dir.iterdir() if p.is_dir())

    results: list[tuple[str, Optional[dict], Optional[str]]] = []
    if options.jobs > 1 and len(app_dirs) > 1:
        with ProcessPoolExecutor(max_workers=options.jobs) as pool:
            results = list(pool.map(
                _analyze_one, [(str(p), options) for p in app_dirs]))
    else:
        results = [_analyze_one((str(p), options)) for p in app_dirs]
    results.sort(key=lambda item: item[0])

    summary = CorpusSummary()
    report_dicts: list[dict] = []
    for app_id, report_dict, error in results:
        if report_dict is not None:
            summary.add_report(report_dict)
            report_dicts.append(report_dict)
        else:
            summary.add_failure(app_id, error or "unknown error")
    return summary, report_dicts


# -- argument handling --------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit code 1 on usage errors
        raise UsageError(message)


def _add_shared_flags(parser) -> None:
    parser.add_argument("--dict-dir", default=None,
                        help="lexicon directory (default: bundled, or "
                             "MCDS_DICT_DIR)")
    parser.add_argument("--sources", default=None,
                        help="source API table (TSV)")
    parser.add_argument("--sinks", default=None, help="sink API table (TSV)")
    parser.add_argument("--similarity", choices=METHODS, default="overlap")
    parser.add_argument("--threshold", type=float, default=1.0)
    parser.add_argument("--classifier", choices=("rule", "mlp"),
                        default="rule")
    parser.add_argument("--model", default=None,
                        help="trained classifier model file")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--out", default=None, help="output directory")


def _options_from(args) -> AnalyzeOptions:
    dict_dir = args.dict_dir or os.environ.get("MCDS_DICT_DIR")
    options = AnalyzeOptions(
        dict_dir=Path(dict_dir) if dict_dir else default_dict_dir(),
        sources_path=Path(args.sources) if args.sources else None,
        sinks_path=Path(args.sinks) if args.sinks else None,
        similarity_method=args.similarity,
        similarity_threshold=args.threshold,
        classifier=args.classifier,
        model_path=Path(args.model) if args.model else None,
        output_format=args.format,
        out_dir=Path(args.out) if args.out else None,
    )
    if not 0.0 <= options.similarity_threshold <= 1.0:
        raise UsageError("--threshold must lie in [0, 1]")
    return options


def build_parser() -> _Parser:
    parser = _Parser(prog="mcds",
                     description="Mini-app code/policy consistency auditor")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="analyze one unpacked app")
    analyze.add_argument("app_dir")
    analyze.add_argument("--policy", default=None,
                         help="privacy policy text file (overrides any "
                              "policy found in the package)")
    _add_shared_flags(analyze)

    corpus = sub.add_parser("corpus", help="analyze a directory of apps")
    corpus.add_argument("corpus_dir")
    corpus.add_argument("--jobs", type=int, default=1)
    _add_shared_flags(corpus)

    train = sub.add_parser("train", help="train the MLP sentence classifier")
    train.add_argument("--corpus", default=None,
                       help="labeled corpus, one 'label<TAB>sentence' per line")
    train.add_argument("--synthetic", type=int, default=0,
                       help="generate N synthetic sentences instead")
    train.add_argument("--seed", type=int, default=7)
    train.add_argument("--epochs", type=int, default=200)
    train.add_argument("--dict-dir", default=None)
    train.add_argument("--out", required=True, help="model output file")
    train.add_argument("--dump-corpus", default=None,
                       help="also write the training corpus here")
    return parser


def _cmd_analyze(args) -> int:
    options = _options_from(args)
    policy = Path(args.policy) if args.policy else None
    report = analyze_app(args.app_dir, policy, options)
    payload = report.to_json()
    if options.out_dir is not None:
        options.out_dir.mkdir(parents=True, exist_ok=True)
        (options.out_dir / f"{report.app_id}.json").write_text(
            payload, encoding="utf-8")
        if options.output_format == "csv":
            _write_practices_csv(options.out_dir / f"{report.app_id}.csv",
                                 report)
    else:
        sys.stdout.write(payload)
    return 0


def _write_practices_csv(path: Path, report: AppReport) -> None:
    lines = ["side,data_type,operation"]
    for side, practices in (("code", report.code_practices),
                            ("policy", report.policy_practices)):
        for data_type, operation in sorted(p.as_pair() for p in practices):
            lines.append(f"{side},{data_type},{operation}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _cmd_corpus(args) -> int:
    options = _options_from(args)
    options = replace(options, jobs=max(args.jobs, 1))
    out_dir = options.out_dir or Path("mcds-out")
    summary, report_dicts = analyze_corpus(args.corpus_dir, options)
    out_dir.mkdir(parents=True, exist_ok=True)
    for report_dict in report_dicts:
        path = out_dir / f"{report_dict['app_id']}.json"
        path.write_text(json.dumps(report_dict, indent=2, sort_keys=True,
                                   ensure_ascii=False) + "\n",
                        encoding="utf-8")
    (out_dir / "summary.json").write_text(summary.to_json(), encoding="utf-8")
    if options.output_format == "csv":
        (out_dir / "pattern_counts.csv").write_text(
            summary.pattern_csv(), encoding="utf-8")
        (out_dir / "practice_matrix.csv").write_text(
            summary.practice_matrix_csv(), encoding="utf-8")
        (out_dir / "findings.csv").write_text(
            summary.findings_csv(), encoding="utf-8")
    sys.stdout.write(f"analyzed {summary.analyzed} apps "
                     f"({summary.failed} failed); reports in {out_dir}\n")
    return 0


def _cmd_train(args) -> int:
    dict_dir = Path(args.dict_dir) if args.dict_dir \
        else Path(os.environ.get("MCDS_DICT_DIR") or default_dict_dir())
    type_lexicon, operation_lexicon = load_lexicons(dict_dir)
    vocabulary = build_vocabulary(type_lexicon, operation_lexicon)
    if args.corpus:
        corpus = read_corpus(args.corpus)
    elif args.synthetic > 0:
        corpus = generate_corpus(args.synthetic, args.seed, type_lexicon,
                                 operation_lexicon, vocabulary)
    else:
        raise UsageError("train needs --corpus FILE or --synthetic N")
    if args.dump_corpus:
        write_corpus(corpus, args.dump_corpus)
    vectors = [(label, vocabulary.vector(sentence))
               for label, sentence in corpus]
    model = train_mlp(vectors, len(vocabulary), seed=args.seed,
                      epochs=args.epochs)
    model.save(args.out)
    sys.stdout.write(f"model written to {args.out} "
                     f"(input={len(vocabulary)}, seed={args.seed})\n")
    return 0


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "analyze":
            return _cmd_analyze(args)
        if args.command == "corpus":
            return _cmd_corpus(args)
        return _cmd_train(args)
    except UsageError as err:
        sys.stderr.write(f"usage error: {err}\n")
        return 1
    except (MissingEntry, UnreadableFile, OSError) as err:
        sys.stderr.write(f"i/o error: {err}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
