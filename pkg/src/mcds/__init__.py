"""Static consistency auditor for mini-app data practices.

Derives (data type, data operation) tuples independently from program
code, via entity/scope-chain taint analysis, and from privacy-policy
text, via sentence classification and similarity-based extraction, then
classifies their agreement into five consistency patterns.
"""

from .cli import AnalyzeOptions, analyze_app, analyze_corpus, main
from .consistency import ConsistencyResult, compare, compare_projections
from .ddg import BuiltinRules, DataDependencyGraph, build_ddg
from .errors import (DimensionMismatch, DuplicatePhrase, EmptyInput,
                     FatalSyntaxError, LexiconError, MalformedMarkup,
                     McdsError, MissingEntry, SchemaError, TableError,
                     UnknownPrimary, UnreadableFile)
from .estree import import_estree
from .ingest import (LayoutNode, LayoutTree, MiniAppPackage, PageUnit,
                     load_package, parse_layout)
from .jsast import AstNode, Span
from .jsparser import parse_js
from .lexicon import (OperationLexicon, TypeLexicon, load_lexicons,
                      load_policy_keywords, load_report)
from .report import AppReport, CorpusSummary
from .scopes import CodeEntity, Scope, ScopeChain, build_scope_chain
from .taint import (DataPractice, SinkSpec, SourceSpec, TaintFlow, UiSource,
                    find_flows, flows_to_practices, load_sink_table,
                    load_source_table, resolve_ui_sources)

__version__ = "0.1.0"

__all__ = [
    "AnalyzeOptions", "analyze_app", "analyze_corpus", "main",
    "ConsistencyResult", "compare", "compare_projections",
    "BuiltinRules", "DataDependencyGraph", "build_ddg",
    "McdsError", "MissingEntry", "UnreadableFile", "MalformedMarkup",
    "FatalSyntaxError", "SchemaError", "LexiconError", "DuplicatePhrase",
    "UnknownPrimary", "TableError", "DimensionMismatch", "EmptyInput",
    "import_estree",
    "LayoutNode", "LayoutTree", "MiniAppPackage", "PageUnit",
    "load_package", "parse_layout",
    "AstNode", "Span", "parse_js",
    "OperationLexicon", "TypeLexicon", "load_lexicons",
    "load_policy_keywords", "load_report",
    "AppReport", "CorpusSummary",
    "CodeEntity", "Scope", "ScopeChain", "build_scope_chain",
    "DataPractice", "SinkSpec", "SourceSpec", "TaintFlow", "UiSource",
    "find_flows", "flows_to_practices", "load_sink_table",
    "load_source_table", "resolve_ui_sources",
    "__version__",
]
