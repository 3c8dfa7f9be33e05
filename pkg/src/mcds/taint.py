"""Flow endpoints, source-to-sink search, and data practice derivation.

Sources are platform APIs whose return value carries typed user data, and
user-interface components whose text identifies what the user enters.
Sinks are APIs that consume data, split into Usage (kept on device) and
Transmission (sent out). A taint flow is a path in the data dependency
graph from a source endpoint to a sink's argument endpoint; each flow then
contributes (type, Collect) plus (type, Use) or (type, Send) tuples.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

from .ddg import DataDependencyGraph
from .errors import TableError
from .ingest import LayoutTree
from .lexicon import TypeLexicon, tokenize
from .scopes import ScopeChain

COLLECT = "Collect"
USE = "Use"
SEND = "Send"

USAGE = "Usage"
TRANSMISSION = "Transmission"

SOURCE_CATEGORIES = ("System", "Storage", "Network", "Media", "Location",
                     "File", "Share", "Device", "Open Interface", "Lifecycle")

# components whose value comes from the user's fingers
_INPUT_TAGS = frozenset({"input", "textarea", "picker", "picker-view",
                         "switch", "slider", "checkbox", "checkbox-group",
                         "radio", "radio-group", "editor", "form"})

_ANCESTOR_SEARCH_DEPTH = 3


@dataclass(frozen=True)
class DataPractice:
    data_type: str
    operation: str  # Collect | Use | Send

    def as_pair(self) -> tuple[str, str]:
        return (self.data_type, self.operation)


@dataclass
class SourceSpec:
    api_name: str
    category: str
    data_type: str
    is_async: bool


@dataclass
class SinkSpec:
    api_name: str
    category: str  # Usage | Transmission


@dataclass
class UiSource:
    page_id: str
    component_span: tuple[int, int]
    component_tag: str
    event: str
    handler: str
    label_text: str
    provenance: str  # own | placeholder | ancestor:<k> | none
    data_type: Optional[str] = None
    handler_entity: Optional[int] = None


@dataclass
class TaintFlow:
    source: Union[SourceSpec, UiSource]
    path: list[int]
    sink: Optional[SinkSpec]
    data_type: str
    source_site: str
    sink_site: Optional[str] = None

    @property
    def source_name(self) -> str:
        if isinstance(self.source, SourceSpec):
            return self.source.api_name
        return f"ui:{self.source.component_tag}/{self.source.event}"

    @property
    def source_kind(self) -> str:
        return "api" if isinstance(self.source, SourceSpec) else "ui"


# --------------------------------------------------------------------------
# table loading


def default_sources_path() -> Path:
    return Path(__file__).parent / "data" / "sources.tsv"


def default_sinks_path() -> Path:
    return Path(__file__).parent / "data" / "sinks.tsv"


def _table_lines(path: Path):
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split(" #", 1)[0].strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line


def table_targets(path: Path) -> dict[str, int]:
    """Per-category full-table sizes recorded as '#target:' metadata."""
    targets: dict[str, int] = {}
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        if raw.startswith("#target:"):
            body = raw[len("#target:"):].strip()
            category, _, count = body.rpartition(" ")
            if category and count.isdigit():
                targets[category] = int(count)
    return targets


def load_source_table(path: Optional[Path] = None,
                      type_lexicon: Optional[TypeLexicon] = None,
                      ) -> dict[str, SourceSpec]:
    path = path or default_sources_path()
    table: dict[str, SourceSpec] = {}
    for lineno, line in _table_lines(path):
        parts = line.split("\t")
        if len(parts) != 4:
            raise TableError(f"{path}:{lineno}: expected 4 tab-separated "
                             f"fields, got {len(parts)}")
        api_name, category, data_type, async_flag = (p.strip() for p in parts)
        if api_name in table:
            raise TableError(f"{path}:{lineno}: duplicate source {api_name!r}")
        if category not in SOURCE_CATEGORIES:
            raise TableError(f"{path}:{lineno}: unknown source category "
                             f"{category!r}")
        if type_lexicon is not None and not type_lexicon.is_type(data_type):
            raise TableError(f"{path}:{lineno}: data type {data_type!r} does "
                             f"not resolve through the type lexicon")
        table[api_name] = SourceSpec(api_name, category, data_type,
                                     async_flag in ("1", "true", "yes"))
    return table


def load_sink_table(path: Optional[Path] = None) -> dict[str, SinkSpec]:
    path = path or default_sinks_path()
    table: dict[str, SinkSpec] = {}
    for lineno, line in _table_lines(path):
        parts = line.split("\t")
        if len(parts) != 2:
            raise TableError(f"{path}:{lineno}: expected 2 tab-separated "
                             f"fields, got {len(parts)}")
        api_name, category = (p.strip() for p in parts)
        if api_name in table:
            raise TableError(f"{path}:{lineno}: duplicate sink {api_name!r}")
        norm = category.lower()
        if norm == "usage":
            table[api_name] = SinkSpec(api_name, USAGE)
        elif norm == "transmission":
            table[api_name] = SinkSpec(api_name, TRANSMISSION)
        else:
            raise TableError(f"{path}:{lineno}: sink category must be "
                             f"usage or transmission, got {category!r}")
    return table


# --------------------------------------------------------------------------
# UI sources


def resolve_ui_sources(layout: LayoutTree, chain: ScopeChain,
                       type_lexicon: TypeLexicon, page_id: str = "",
                       ) -> tuple[list[UiSource], list[dict]]:
    """Associate event-bound/input components with handlers and data types.

    Returns (ui sources, diagnostics). A binding whose handler cannot be
    found in the logic file is reported as an unbound handler but the
    component is kept, with the data type matched from text alone.
    """
    sources: list[UiSource] = []
    diagnostics: list[dict] = []
    handler_index = _handler_index(chain)

    for node in layout.walk():
        bindings = dict(node.bindings)
        if not bindings and node.tag in _INPUT_TAGS:
            inherited = _enclosing_form_handler(node)
            if inherited is not None:
                bindings = {inherited[0]: inherited[1]}
        for event, handler in sorted(bindings.items()):
            label, provenance = _resolve_label(node)
            data_type = type_lexicon.best_match(label) if label else None
            if data_type is None and handler:
                data_type = type_lexicon.best_match(" ".join(tokenize(handler)))
            entity = handler_index.get(handler)
            if entity is None:
                diagnostics.append({
                    "code": "unbound-handler",
                    "message": f"handler {handler!r} bound on "
                               f"<{node.tag}> not found in logic",
                    "where": f"{page_id}:{node.line}",
                })
            sources.append(UiSource(
                page_id=page_id,
                component_span=(node.line, node.col),
                component_tag=node.tag,
                event=event,
                handler=handler,
                label_text=label,
                provenance=provenance,
                data_type=data_type,
                handler_entity=entity,
            ))
    return sources, diagnostics


def _handler_index(chain: ScopeChain) -> dict[str, int]:
    """handler name -> function entity, from page methods then file scope."""
    index: dict[str, int] = {}
    for container in chain.containers:
        for name, entity in container.methods.items():
            index.setdefault(name, entity)
    root = chain.root()
    for name, entity_id in root.bindings.items():
        entity = chain.entities[entity_id]
        if entity.kind == "Function":
            index.setdefault(name, entity_id)
        elif entity.kind == "Variable":
            index.setdefault(name, entity_id)
    return index


def _enclosing_form_handler(node) -> Optional[tuple[str, str]]:
    current = node.parent
    while current is not None:
        if current.tag == "form":
            handler = current.bindings.get("submit")
            if handler:
                return ("submit", handler)
        current = current.parent
    return None


def _resolve_label(node) -> tuple[str, str]:
    """Own text, else placeholder, else nearest ancestor subtree text."""
    if node.text:
        return node.text, "own"
    placeholder = node.attrs.get("placeholder", "")
    if placeholder:
        return placeholder, "placeholder"
    current = node.parent
    for depth in range(1, _ANCESTOR_SEARCH_DEPTH + 1):
        if current is None or current.tag == "<root>":
            break
        text = current.subtree_text()
        if text:
            return text, f"ancestor:{depth}"
        current = current.parent
    return "", "none"


# --------------------------------------------------------------------------
# flow search


def find_flows(ddg: DataDependencyGraph,
               sources: dict[str, SourceSpec],
               ui: list[UiSource],
               sinks: dict[str, SinkSpec]) -> list[TaintFlow]:
    """One flow per (source endpoint, reachable sink endpoint) pair.

    Sources with no reachable sink still yield a sink-less flow: the data
    was collected even if it never leaves the page.
    """
    sink_endpoints: dict[int, tuple[SinkSpec, str]] = {}
    for call in ddg.api_calls:
        spec = sinks.get(call.name)
        if spec is not None:
            sink_endpoints[call.arg_id] = (
                spec, f"{ddg.file_id}:{call.site.start_line}")

    flows: list[TaintFlow] = []

    def search_from(endpoint: Optional[int], origin, data_type: str,
                    site: str) -> None:
        if endpoint is None:
            flows.append(TaintFlow(origin, [], None, data_type, site))
            return
        pred = ddg.search(endpoint)
        hits = [ep for ep in sink_endpoints if ep in pred]
        hits.sort(key=lambda ep: ddg.entity(ep).entity_id)
        for ep in hits:
            spec, sink_site = sink_endpoints[ep]
            flows.append(TaintFlow(origin, ddg.path_to(pred, ep), spec,
                                   data_type, site, sink_site))
        if not hits:
            flows.append(TaintFlow(origin, [endpoint], None, data_type, site))

    for call in ddg.api_calls:
        spec = sources.get(call.name)
        if spec is None:
            continue
        # the returned data must land somewhere (a callback parameter or a
        # binding) before anything was collected; a bare wx.request call is
        # a sink use only, not a "request return" collection
        if not ddg.adjacency.get(call.ret_id):
            continue
        site = f"{ddg.file_id}:{call.site.start_line}"
        search_from(call.ret_id, spec, spec.data_type, site)

    chain = ddg.chain
    for ui_source in ui:
        if ui_source.data_type is None:
            continue
        endpoint: Optional[int] = None
        if ui_source.handler_entity is not None:
            scope_id = chain.function_scopes.get(ui_source.handler_entity)
            if scope_id is not None:
                params = chain.scopes[scope_id].param_entities
                if params:
                    endpoint = params[0]
        site = f"{ui_source.page_id}:{ui_source.component_span[0]}"
        search_from(endpoint, ui_source, ui_source.data_type, site)

    return flows


def flows_to_practices(flows: list[TaintFlow]) -> set[DataPractice]:
    """Collect always; Use/Send by the sink category at the flow's end."""
    practices: set[DataPractice] = set()
    for flow in flows:
        practices.add(DataPractice(flow.data_type, COLLECT))
        if flow.sink is None:
            continue
        if flow.sink.category == USAGE:
            practices.add(DataPractice(flow.data_type, USE))
        elif flow.sink.category == TRANSMISSION:
            practices.add(DataPractice(flow.data_type, SEND))
    return practices


def validate_closure(sources: dict[str, SourceSpec],
                     type_lexicon: TypeLexicon) -> list[str]:
    """Source data types that do not resolve through the lexicon."""
    return sorted({spec.data_type for spec in sources.values()
                   if not type_lexicon.is_type(spec.data_type)})
