"""Load an unpacked mini-app package and parse page layouts.

A package is a plain directory: an ``app.json`` entry configuration, page
logic files (``.js``), layouts (``.wxml``) and per-page configs
(``.json``). Pages are discovered from the configuration's page list
first, then by scanning for orphan logic/layout pairs, because real
packages in the wild are inconsistent. A statically attached privacy
policy is found by keyword match on file names and contents.

Layout parsing is deliberately lenient: unknown tags are fine, stray close
tags are dropped, unclosed elements auto-close. Only damage the scanner
cannot get past (an unterminated quoted attribute running to end of input)
raises MalformedMarkup.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Optional

from .errors import MalformedMarkup, MissingEntry, UnreadableFile
from .lexicon import default_dict_dir, load_policy_keywords, normalize

APP_CONFIG = "app.json"

# tags that never take a closing tag in WXML/HTML-ish markup
_VOID_TAGS = frozenset({"input", "image", "img", "br", "hr", "import",
                        "include"})

_POLICY_SUFFIXES = {".txt", ".md", ".html", ".htm", ".json"}
_TAG_STRIP_RE = re.compile(r"<[^>]*>")


# --------------------------------------------------------------------------
# layout model


@dataclass
class LayoutNode:
    tag: str
    attrs: dict[str, str] = field(default_factory=dict)
    text: str = ""
    children: list["LayoutNode"] = field(default_factory=list)
    parent: Optional["LayoutNode"] = None
    line: int = 1
    col: int = 0

    @property
    def bindings(self) -> dict[str, str]:
        """Event bindings: bindtap/catchtap/bind:tap -> {tap: handler}."""
        out: dict[str, str] = {}
        for key, value in self.attrs.items():
            name = key.lower()
            for prefix in ("capture-bind", "capture-catch", "bind", "catch",
                           "mut-bind"):
                if name.startswith(prefix):
                    event = name[len(prefix):].lstrip(":")
                    if event and value:
                        out[event] = value
                    break
        return out

    def subtree_text(self) -> str:
        """All literal text in this node's subtree; the node's own text
        comes first, then each child subtree in document order."""
        parts = [self.text] if self.text else []
        for child in self.children:
            sub = child.subtree_text()
            if sub:
                parts.append(sub)
        return " ".join(parts)

    def walk(self) -> Iterator["LayoutNode"]:
        yield self
        for child in self.children:
            yield from child.walk()


@dataclass
class LayoutTree:
    root: LayoutNode

    def walk(self) -> Iterator[LayoutNode]:
        for child in self.root.children:
            yield from child.walk()

    def is_empty(self) -> bool:
        return not self.root.children and not self.root.text

    def to_markup(self) -> str:
        """Serialize back to markup; preserves every attribute pair."""
        out: list[str] = []

        def emit(node: LayoutNode) -> None:
            attrs = "".join(
                f' {key}="{value}"' for key, value in node.attrs.items())
            out.append(f"<{node.tag}{attrs}>")
            if node.text:
                out.append(node.text)
            for child in node.children:
                emit(child)
            out.append(f"</{node.tag}>")

        if self.root.text:
            out.append(self.root.text)
        for child in self.root.children:
            emit(child)
        return "".join(out)


class _LayoutParser:
    def __init__(self, source: str):
        self.src = source
        self.pos = 0
        self.line = 1
        self.col = 0

    def _advance_over(self, text: str) -> None:
        for ch in text:
            if ch == "\n":
                self.line += 1
                self.col = 0
            else:
                self.col += 1
        self.pos += len(text)

    def parse(self) -> LayoutTree:
        root = LayoutNode("<root>")
        stack = [root]
        while self.pos < len(self.src):
            lt = self.src.find("<", self.pos)
            if lt == -1:
                self._add_text(stack[-1], self.src[self.pos:])
                self._advance_over(self.src[self.pos:])
                break
            if lt > self.pos:
                self._add_text(stack[-1], self.src[self.pos:lt])
                self._advance_over(self.src[self.pos:lt])
            if self.src.startswith("<!--", self.pos):
                end = self.src.find("-->", self.pos)
                chunk = self.src[self.pos:] if end == -1 \
                    else self.src[self.pos:end + 3]
                self._advance_over(chunk)
                continue
            if self.src.startswith("</", self.pos):
                self._close_tag(stack)
                continue
            if self.src.startswith("<!", self.pos) or \
                    self.src.startswith("<?", self.pos):
                end = self.src.find(">", self.pos)
                chunk = self.src[self.pos:] if end == -1 \
                    else self.src[self.pos:end + 1]
                self._advance_over(chunk)
                continue
            self._open_tag(stack)
        return LayoutTree(root)

    @staticmethod
    def _add_text(node: LayoutNode, raw: str) -> None:
        text = raw.strip()
        if text:
            node.text = f"{node.text} {text}".strip() if node.text else text

    def _open_tag(self, stack: list[LayoutNode]) -> None:
        line, col = self.line, self.col
        self._advance_over("<")
        name = self._read_name()
        if not name:
            # stray '<' in text: recover by treating it as literal text
            self._add_text(stack[-1], "<")
            return
        node = LayoutNode(name.lower(), line=line, col=col)
        self_closing = False
        while True:
            self._skip_ws()
            if self.pos >= len(self.src):
                break  # unclosed tag at EOF: keep what we have
            if self.src.startswith("/>", self.pos):
                self._advance_over("/>")
                self_closing = True
                break
            if self.src.startswith(">", self.pos):
                self._advance_over(">")
                break
            key = self._read_attr_name()
            if not key:
                self._advance_over(self.src[self.pos])
                continue
            value = ""
            self._skip_ws()
            if self.src.startswith("=", self.pos):
                self._advance_over("=")
                self._skip_ws()
                value = self._read_attr_value()
            node.attrs[key] = value
        node.parent = stack[-1]
        stack[-1].children.append(node)
        if not self_closing and node.tag not in _VOID_TAGS:
            stack.append(node)

    def _close_tag(self, stack: list[LayoutNode]) -> None:
        self._advance_over("</")
        name = self._read_name().lower()
        end = self.src.find(">", self.pos)
        chunk = self.src[self.pos:] if end == -1 else self.src[self.pos:end + 1]
        self._advance_over(chunk)
        for depth in range(len(stack) - 1, 0, -1):
            if stack[depth].tag == name:
                del stack[depth:]  # auto-close intermediates
                return
        # no matching open tag: ignore the stray close tag

    def _read_name(self) -> str:
        start = self.pos
        while self.pos < len(self.src) and \
                (self.src[self.pos].isalnum() or self.src[self.pos] in "-_:"):
            self.pos += 1
        name = self.src[start:self.pos]
        self.pos = start
        self._advance_over(name)
        return name

    def _read_attr_name(self) -> str:
        start = self.pos
        while self.pos < len(self.src) and self.src[self.pos] not in "= \t\n\r/>":
            self.pos += 1
        name = self.src[start:self.pos]
        self.pos = start
        self._advance_over(name)
        return name

    def _read_attr_value(self) -> str:
        if self.pos >= len(self.src):
            return ""
        quote = self.src[self.pos]
        if quote in "'\"":
            qline, qcol = self.line, self.col
            self._advance_over(quote)
            end = self.src.find(quote, self.pos)
            if end == -1:
                raise MalformedMarkup("unterminated attribute value",
                                      qline, qcol)
            value = self.src[self.pos:end]
            self._advance_over(value + quote)
            return value
        start = self.pos
        while self.pos < len(self.src) and self.src[self.pos] not in " \t\n\r>":
            self.pos += 1
        value = self.src[start:self.pos]
        self.pos = start
        self._advance_over(value)
        return value

    def _skip_ws(self) -> None:
        while self.pos < len(self.src) and self.src[self.pos] in " \t\n\r":
            self._advance_over(self.src[self.pos])


def parse_layout(layout_source: str) -> LayoutTree:
    """Parse WXML-style markup into a component tree."""
    return _LayoutParser(layout_source).parse()


# --------------------------------------------------------------------------
# package model


@dataclass
class PageUnit:
    page_id: str
    logic_source: Optional[str] = None
    layout_source: Optional[str] = None
    config: Optional[dict] = None

    def to_dict(self) -> dict:
        return {
            "page_id": self.page_id,
            "has_logic": self.logic_source is not None,
            "has_layout": self.layout_source is not None,
            "config": self.config,
        }


@dataclass
class MiniAppPackage:
    root_path: str
    app_config: dict
    pages: list[PageUnit] = field(default_factory=list)
    policy_text: Optional[str] = None
    policy_files: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "root_path": self.root_path,
            "app_config": self.app_config,
            "pages": [p.to_dict() for p in self.pages],
            "policy_files": self.policy_files,
            "policy_text": self.policy_text,
            "warnings": self.warnings,
        }


def _read_text(path: Path, warnings: list[str]) -> Optional[str]:
    try:
        return path.read_text(encoding="utf-8")
    except UnicodeDecodeError as err:
        warnings.append(f"unreadable file {path}: {err}")
    except OSError as err:
        warnings.append(f"unreadable file {path}: {err}")
    return None


def load_package(root, dict_dir: Optional[Path] = None) -> MiniAppPackage:
    """Load a package directory into a MiniAppPackage.

    Raises MissingEntry when no app entry configuration exists and
    UnreadableFile when the entry configuration cannot be decoded.
    """
    root = Path(root)
    if not root.is_dir():
        raise MissingEntry(f"{root} is not a directory")
    entry = root / APP_CONFIG
    if not entry.exists():
        raise MissingEntry(f"no {APP_CONFIG} in {root}")
    try:
        app_config = json.loads(entry.read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as err:
        raise UnreadableFile(entry, str(err)) from err
    if not isinstance(app_config, dict):
        raise UnreadableFile(entry, "entry configuration is not an object")

    warnings: list[str] = []
    pages: list[PageUnit] = []
    seen: set[str] = set()

    def add_page(page_id: str) -> None:
        if page_id in seen:
            return
        seen.add(page_id)
        logic = _read_text(root / f"{page_id}.js", warnings) \
            if (root / f"{page_id}.js").exists() else None
        layout = _read_text(root / f"{page_id}.wxml", warnings) \
            if (root / f"{page_id}.wxml").exists() else None
        config = None
        config_path = root / f"{page_id}.json"
        if config_path.exists():
            raw = _read_text(config_path, warnings)
            if raw is not None:
                try:
                    parsed = json.loads(raw)
                    config = parsed if isinstance(parsed, dict) else None
                except json.JSONDecodeError as err:
                    warnings.append(f"bad page config {config_path}: {err}")
        if logic is None and layout is None:
            warnings.append(f"page {page_id!r} has no logic or layout file")
            return
        pages.append(PageUnit(page_id, logic, layout, config))

    declared = app_config.get("pages", [])
    if isinstance(declared, list):
        for page_id in declared:
            if isinstance(page_id, str):
                add_page(page_id)

    # fall back to a file-system scan for pages the config does not list
    orphan_stems: set[str] = set()
    for pattern in ("*.js", "*.wxml"):
        for path in root.rglob(pattern):
            stem = path.with_suffix("")
            orphan_stems.add(stem.relative_to(root).as_posix())
    for stem in sorted(orphan_stems):
        add_page(stem)

    package = MiniAppPackage(str(root), app_config, pages,
                             warnings=warnings)
    _attach_policy(package, root, dict_dir)
    return package


def _attach_policy(package: MiniAppPackage, root: Path,
                   dict_dir: Optional[Path]) -> None:
    keywords = load_policy_keywords(dict_dir or default_dict_dir())
    if not keywords:
        return
    matches: list[Path] = []
    for path in sorted(root.rglob("*")):
        if not path.is_file() or path.name == APP_CONFIG:
            continue
        normalized_name = normalize(path.name.replace("_", " ").replace("-", " "))
        by_name = any(kw in normalized_name for kw in keywords)
        by_content = False
        if not by_name and path.suffix.lower() in _POLICY_SUFFIXES:
            head = _read_text(path, [])
            if head:
                by_content = any(kw in normalize(head[:2048]) for kw in keywords)
        if by_name or by_content:
            matches.append(path)
    if not matches:
        return
    texts: list[str] = []
    for path in matches:
        text = _read_text(path, package.warnings)
        if text is None:
            continue
        if path.suffix.lower() in (".html", ".htm"):
            text = _TAG_STRIP_RE.sub(" ", text)
        texts.append(text.strip())
        package.policy_files.append(path.relative_to(root).as_posix())
    if not texts:
        return
    package.policy_text = "\n\n".join(texts)
    if len(texts) > 1:
        package.warnings.append(
            "multiple policy files found; concatenated in path order: "
            + ", ".join(package.policy_files))
