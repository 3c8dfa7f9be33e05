"""Report models: one JSON document per app, aggregate corpus summary.

Canonical output sorts every set lexicographically and carries no
timestamps, so repeated runs over unchanged inputs are byte-identical.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .consistency import ConsistencyResult, PATTERNS
from .taint import COLLECT, SEND, TaintFlow, USE

SCHEMA_VERSION = 1


@dataclass
class AppReport:
    app_id: str
    code_practices: set = field(default_factory=set)
    policy_practices: set = field(default_factory=set)
    flows: list[TaintFlow] = field(default_factory=list)
    consistency: Optional[ConsistencyResult] = None
    diagnostics: list[dict] = field(default_factory=list)
    pages: list[str] = field(default_factory=list)
    policy_files: list[str] = field(default_factory=list)
    projections: Optional[tuple[str, str, str]] = None

    def flow_rows(self) -> list[dict]:
        rows = []
        for flow in self.flows:
            rows.append({
                "source": flow.source_name,
                "source_kind": flow.source_kind,
                "source_site": flow.source_site,
                "sink": flow.sink.api_name if flow.sink else None,
                "sink_category": flow.sink.category if flow.sink else None,
                "sink_site": flow.sink_site,
                "data_type": flow.data_type,
                "path_length": len(flow.path),
            })
        rows.sort(key=lambda r: (r["source_site"], r["source"],
                                 r["sink"] or "", r["sink_site"] or ""))
        return rows

    def to_dict(self) -> dict:
        consistency = self.consistency.to_dict() if self.consistency else None
        if consistency is not None and self.projections is not None:
            consistency["projections"] = {
                "practice": self.projections[0],
                "type": self.projections[1],
                "operation": self.projections[2],
            }
        return {
            "schema_version": SCHEMA_VERSION,
            "app_id": self.app_id,
            "pages": sorted(self.pages),
            "policy_files": sorted(self.policy_files),
            "code_practices": sorted(p.as_pair() for p in self.code_practices),
            "policy_practices": sorted(p.as_pair() for p in self.policy_practices),
            "flows": self.flow_rows(),
            "consistency": consistency,
            "diagnostics": sorted(
                self.diagnostics,
                key=lambda d: (d.get("where") or "", d.get("code") or "",
                               d.get("message") or "")),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True,
                          ensure_ascii=False) + "\n"


@dataclass
class CorpusSummary:
    analyzed: int = 0
    failed: int = 0
    pattern_counts: dict = field(default_factory=dict)
    code_type_counts: dict = field(default_factory=dict)
    policy_type_counts: dict = field(default_factory=dict)
    code_operation_counts: dict = field(default_factory=dict)
    policy_operation_counts: dict = field(default_factory=dict)
    strong_uninformed_counts: dict = field(default_factory=dict)
    strong_redundant_counts: dict = field(default_factory=dict)
    weak_uninformed_counts: dict = field(default_factory=dict)
    weak_redundant_counts: dict = field(default_factory=dict)
    # (data_type, operation) -> number of apps exhibiting that practice
    code_practice_counts: dict = field(default_factory=dict)
    policy_practice_counts: dict = field(default_factory=dict)
    failures: list[dict] = field(default_factory=list)

    def add_report(self, report_dict: dict) -> None:
        self.analyzed += 1
        consistency = report_dict.get("consistency") or {}
        pattern = consistency.get("pattern")
        if pattern:
            self.pattern_counts[pattern] = \
                self.pattern_counts.get(pattern, 0) + 1
        for side, type_counts, op_counts, practice_counts in (
                ("code_practices", self.code_type_counts,
                 self.code_operation_counts, self.code_practice_counts),
                ("policy_practices", self.policy_type_counts,
                 self.policy_operation_counts, self.policy_practice_counts)):
            types_seen = set()
            ops_seen = set()
            for data_type, operation in report_dict.get(side, []):
                types_seen.add(data_type)
                ops_seen.add(operation)
                key = (data_type, operation)
                practice_counts[key] = practice_counts.get(key, 0) + 1
            for data_type in types_seen:
                type_counts[data_type] = type_counts.get(data_type, 0) + 1
            for operation in ops_seen:
                op_counts[operation] = op_counts.get(operation, 0) + 1
        for key, counter in (
                ("strong_uninformed", self.strong_uninformed_counts),
                ("strong_redundant", self.strong_redundant_counts)):
            for data_type in consistency.get(key, []):
                counter[data_type] = counter.get(data_type, 0) + 1
        for key, counter in (
                ("weak_uninformed", self.weak_uninformed_counts),
                ("weak_redundant", self.weak_redundant_counts)):
            for data_type, _ops in consistency.get(key, []):
                counter[data_type] = counter.get(data_type, 0) + 1

    def add_failure(self, app_id: str, message: str) -> None:
        self.failed += 1
        self.failures.append({"app_id": app_id, "error": message})

    def to_dict(self) -> dict:
        def ordered(counter: dict) -> dict:
            return {k: counter[k] for k in sorted(counter)}

        def practice_rows(counter: dict) -> list:
            return [[t, op, counter[(t, op)]]
                    for t, op in sorted(counter)]

        return {
            "schema_version": SCHEMA_VERSION,
            "analyzed": self.analyzed,
            "failed": self.failed,
            "pattern_counts": {p: self.pattern_counts.get(p, 0)
                               for p in PATTERNS},
            "code_type_counts": ordered(self.code_type_counts),
            "policy_type_counts": ordered(self.policy_type_counts),
            "code_operation_counts": ordered(self.code_operation_counts),
            "policy_operation_counts": ordered(self.policy_operation_counts),
            "code_practice_counts": practice_rows(self.code_practice_counts),
            "policy_practice_counts": practice_rows(self.policy_practice_counts),
            "strong_uninformed_counts": ordered(self.strong_uninformed_counts),
            "strong_redundant_counts": ordered(self.strong_redundant_counts),
            "weak_uninformed_counts": ordered(self.weak_uninformed_counts),
            "weak_redundant_counts": ordered(self.weak_redundant_counts),
            "failures": sorted(self.failures, key=lambda f: f["app_id"]),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True,
                          ensure_ascii=False) + "\n"

    # -- CSV tables ready for external plotting --------------------------

    def pattern_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["pattern", "count"])
        for pattern in PATTERNS:
            writer.writerow([pattern, self.pattern_counts.get(pattern, 0)])
        return out.getvalue()

    def practice_matrix_csv(self) -> str:
        """Type-by-operation app counts per side, plot-ready."""
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["side", "data_type", COLLECT, USE, SEND])
        for side, counter in (("code", self.code_practice_counts),
                              ("policy", self.policy_practice_counts)):
            types = sorted({t for t, _ in counter})
            for data_type in types:
                writer.writerow([
                    side, data_type,
                    counter.get((data_type, COLLECT), 0),
                    counter.get((data_type, USE), 0),
                    counter.get((data_type, SEND), 0),
                ])
        return out.getvalue()

    def findings_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["finding", "data_type", "apps"])
        for label, counter in (
                ("strong_uninformed", self.strong_uninformed_counts),
                ("strong_redundant", self.strong_redundant_counts),
                ("weak_uninformed", self.weak_uninformed_counts),
                ("weak_redundant", self.weak_redundant_counts)):
            for data_type in sorted(counter):
                writer.writerow([label, data_type, counter[data_type]])
        return out.getvalue()


def summarize_reports(report_dicts: Iterable[dict]) -> CorpusSummary:
    """Aggregate per-app report dictionaries into a corpus summary."""
    summary = CorpusSummary()
    for report in report_dicts:
        summary.add_report(report)
    return summary
