"""AST node model for the JavaScript subset the analyzer understands.

Anything outside the canonical kind set is represented as an Opaque node
whose children are preserved where they could be recovered, so later
passes degrade instead of crashing on exotic or broken input.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterator, Optional

# Canonical node kinds. Parsers (native and interchange import) must map
# everything else onto Opaque so downstream passes see one vocabulary.
CANONICAL_KINDS = frozenset({
    "Program",
    "VariableDeclaration",
    "FunctionDeclaration",
    "FunctionExpression",
    "ArrowFunctionExpression",
    "AssignmentExpression",
    "CallExpression",
    "MemberExpression",
    "ObjectExpression",
    "Property",
    "ReturnStatement",
    "Identifier",
    "Literal",
    "LogicalExpression",
    "BinaryExpression",
    "ArrayExpression",
    "IfStatement",
    "ForStatement",
    "WhileStatement",
    "BlockStatement",
    "ExpressionStatement",
    "Opaque",
})

FUNCTION_KINDS = frozenset({
    "FunctionDeclaration",
    "FunctionExpression",
    "ArrowFunctionExpression",
})


@dataclass(frozen=True)
class Span:
    """(line, column) start/end of a node; lines 1-based, columns 0-based."""

    start_line: int
    start_col: int
    end_line: int
    end_col: int

    def contains(self, other: "Span") -> bool:
        start_ok = (self.start_line, self.start_col) <= (other.start_line, other.start_col)
        end_ok = (other.end_line, other.end_col) <= (self.end_line, self.end_col)
        return start_ok and end_ok

    def __str__(self) -> str:
        return f"{self.start_line}:{self.start_col}-{self.end_line}:{self.end_col}"


@dataclass
class AstNode:
    """One node of the syntax tree.

    ``info`` carries kind-specific facts that do not fit the uniform child
    list: identifier names, literal values, operators, declarator pairing,
    member ``computed`` flags and so on.
    """

    kind: str
    children: list["AstNode"] = field(default_factory=list)
    span: Span = Span(1, 0, 1, 0)
    raw: str = ""
    info: dict[str, Any] = field(default_factory=dict)
    node_id: int = -1

    @property
    def name(self) -> Optional[str]:
        return self.info.get("name")

    def walk(self) -> Iterator["AstNode"]:
        """Pre-order traversal including self."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def count(self) -> int:
        return sum(1 for _ in self.walk())

    def kind_multiset(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for node in self.walk():
            counts[node.kind] = counts.get(node.kind, 0) + 1
        return counts

    def pretty(self, indent: int = 0) -> str:
        label = self.kind
        if "name" in self.info:
            label += f"({self.info['name']})"
        elif "value" in self.info:
            label += f"({self.info['value']!r})"
        elif "operator" in self.info:
            label += f"({self.info['operator']})"
        lines = ["  " * indent + label]
        for child in self.children:
            lines.append(child.pretty(indent + 1))
        return "\n".join(lines)


def number_nodes(root: AstNode) -> int:
    """Assign sequential ids in pre-order; returns the node count."""
    n = 0
    for node in root.walk():
        node.node_id = n
        n += 1
    return n


def identifier(name: str, span: Span, raw: str = "") -> AstNode:
    return AstNode("Identifier", [], span, raw or name, {"name": name})


def literal(value: Any, span: Span, raw: str = "") -> AstNode:
    return AstNode("Literal", [], span, raw, {"value": value})


def static_member_path(node: AstNode) -> Optional[str]:
    """Dotted name of a member/identifier chain, e.g. ``wx.request``.

    Only chains made of identifiers and non-computed (or string-literal)
    property accesses have a static path; anything else returns None.
    """
    if node.kind == "Identifier":
        return node.info["name"]
    if node.kind == "MemberExpression":
        base = static_member_path(node.children[0])
        if base is None:
            return None
        prop = member_property_name(node)
        if prop is None:
            return None
        return f"{base}.{prop}"
    return None


def member_property_name(member: AstNode) -> Optional[str]:
    """Static property name of a MemberExpression, or None when computed."""
    prop = member.children[1]
    if not member.info.get("computed"):
        if prop.kind == "Identifier":
            return prop.info["name"]
        return None
    if prop.kind == "Literal" and isinstance(prop.info.get("value"), str):
        return prop.info["value"]
    return None
