"""Import ESTree-format AST documents into the native node model.

Lets a production JavaScript parser be substituted for the built-in one:
serialize its AST as ESTree JSON and feed it here. Kinds outside the
canonical set map onto Opaque with the same child shapes the native
parser produces, so node-kind multisets stay comparable.
"""

from __future__ import annotations

import json
from typing import Any, Optional

from .errors import SchemaError
from .jsast import AstNode, Span, number_nodes

_DIRECT_KINDS = frozenset({
    "Program", "ExpressionStatement", "BlockStatement", "IfStatement",
    "WhileStatement", "ReturnStatement", "Identifier",
    "LogicalExpression", "BinaryExpression", "ArrayExpression",
    "ObjectExpression", "CallExpression", "AssignmentExpression",
})


def _span(node: dict) -> Span:
    loc = node.get("loc")
    if not loc:
        return Span(1, 0, 1, 0)
    return Span(loc["start"]["line"], loc["start"]["column"],
                loc["end"]["line"], loc["end"]["column"])


def _is_node(value: Any) -> bool:
    return isinstance(value, dict) and isinstance(value.get("type"), str)


class _Importer:
    def convert(self, node: dict) -> AstNode:
        ntype = node.get("type")
        handler = getattr(self, f"_conv_{ntype}", None)
        if handler is not None:
            return handler(node)
        if ntype in _DIRECT_KINDS:
            return self._direct(node, ntype)
        return self._generic_opaque(node)

    # -- helpers ------------------------------------------------------

    def _children_of(self, node: dict, fields: list[str]) -> list[AstNode]:
        out: list[AstNode] = []
        for name in fields:
            value = node.get(name)
            if _is_node(value):
                out.append(self.convert(value))
            elif isinstance(value, list):
                for item in value:
                    if _is_node(item):
                        out.append(self.convert(item))
        return out

    def _direct(self, node: dict, kind: str) -> AstNode:
        children: list[AstNode] = []
        for key, value in node.items():
            if key in ("loc", "range", "type"):
                continue
            if _is_node(value):
                children.append(self.convert(value))
            elif isinstance(value, list):
                children.extend(self.convert(v) for v in value if _is_node(v))
        info: dict[str, Any] = {}
        for key in ("operator", "computed", "name"):
            if key in node and not _is_node(node[key]):
                info[key] = node[key]
        return AstNode(kind, children, _span(node), "", info)

    def _opaque(self, node: dict, children: list[AstNode]) -> AstNode:
        return AstNode("Opaque", children, _span(node), "",
                       {"estree": node.get("type")})

    def _generic_opaque(self, node: dict) -> AstNode:
        children: list[AstNode] = []
        for key, value in node.items():
            if key in ("loc", "range", "type"):
                continue
            if _is_node(value):
                children.append(self.convert(value))
            elif isinstance(value, list):
                children.extend(self.convert(v) for v in value if _is_node(v))
        return self._opaque(node, children)

    def _function(self, node: dict, kind: str) -> AstNode:
        children: list[AstNode] = []
        name_idx: Optional[int] = None
        if _is_node(node.get("id")):
            children.append(self.convert(node["id"]))
            name_idx = 0
        params = [self.convert(p) for p in node.get("params", []) if _is_node(p)]
        param_idxs = list(range(len(children), len(children) + len(params)))
        children.extend(params)
        body_idx = len(children)
        children.append(self.convert(node["body"]))
        info: dict[str, Any] = {"name_idx": name_idx, "param_idxs": param_idxs,
                                "body_idx": body_idx}
        if kind == "ArrowFunctionExpression":
            info["expression"] = node.get("body", {}).get("type") != "BlockStatement"
        result = AstNode(kind, children, _span(node), "", info)
        if node.get("async") or node.get("generator"):
            return AstNode("Opaque", children, _span(node), "",
                           dict(info, estree=f"{kind}(async/generator)"))
        return result

    # -- specific conversions ------------------------------------------

    def _conv_Program(self, node: dict) -> AstNode:
        children = [self.convert(s) for s in node.get("body", []) if _is_node(s)]
        return AstNode("Program", children, _span(node), "",
                       {"diagnostics": []})

    def _conv_VariableDeclaration(self, node: dict) -> AstNode:
        children: list[AstNode] = []
        declarators: list[tuple[int, Optional[int]]] = []
        for decl in node.get("declarations", []):
            if not _is_node(decl):
                continue
            target = self.convert(decl["id"])
            id_idx = len(children)
            children.append(target)
            init_idx: Optional[int] = None
            if _is_node(decl.get("init")):
                init_idx = len(children)
                children.append(self.convert(decl["init"]))
            declarators.append((id_idx, init_idx))
        return AstNode("VariableDeclaration", children, _span(node), "",
                       {"kind": node.get("kind", "var"),
                        "declarators": declarators})

    def _conv_FunctionDeclaration(self, node: dict) -> AstNode:
        return self._function(node, "FunctionDeclaration")

    def _conv_FunctionExpression(self, node: dict) -> AstNode:
        return self._function(node, "FunctionExpression")

    def _conv_ArrowFunctionExpression(self, node: dict) -> AstNode:
        return self._function(node, "ArrowFunctionExpression")

    def _conv_Identifier(self, node: dict) -> AstNode:
        return AstNode("Identifier", [], _span(node), "",
                       {"name": node.get("name", "")})

    def _conv_ThisExpression(self, node: dict) -> AstNode:
        return AstNode("Identifier", [], _span(node), "", {"name": "this"})

    def _conv_Literal(self, node: dict) -> AstNode:
        info: dict[str, Any] = {}
        if "regex" in node and isinstance(node["regex"], dict):
            info["value"] = node.get("raw", "")
            info["regex"] = True
        else:
            info["value"] = node.get("value")
        return AstNode("Literal", [], _span(node), "", info)

    def _conv_MemberExpression(self, node: dict) -> AstNode:
        children = [self.convert(node["object"]), self.convert(node["property"])]
        return AstNode("MemberExpression", children, _span(node), "",
                       {"computed": bool(node.get("computed"))})

    def _conv_Property(self, node: dict) -> AstNode:
        children = [self.convert(node["key"]), self.convert(node["value"])]
        info = {"kind": node.get("kind", "init")}
        if node.get("shorthand"):
            info["shorthand"] = True
        if node.get("method"):
            info["method"] = True
        return AstNode("Property", children, _span(node), "", info)

    def _conv_ExpressionStatement(self, node: dict) -> AstNode:
        return AstNode("ExpressionStatement", [self.convert(node["expression"])],
                       _span(node), "")

    def _conv_ReturnStatement(self, node: dict) -> AstNode:
        children = []
        if _is_node(node.get("argument")):
            children.append(self.convert(node["argument"]))
        return AstNode("ReturnStatement", children, _span(node), "")

    def _conv_IfStatement(self, node: dict) -> AstNode:
        children = [self.convert(node["test"]), self.convert(node["consequent"])]
        if _is_node(node.get("alternate")):
            children.append(self.convert(node["alternate"]))
        return AstNode("IfStatement", children, _span(node), "")

    def _conv_ForStatement(self, node: dict) -> AstNode:
        children: list[AstNode] = []
        slots: dict[str, Optional[int]] = {"init": None, "test": None,
                                           "update": None}
        for field in ("init", "test", "update"):
            if _is_node(node.get(field)):
                slots[field] = len(children)
                children.append(self.convert(node[field]))
        slots["body"] = len(children)
        children.append(self.convert(node["body"]))
        return AstNode("ForStatement", children, _span(node), "", {"slots": slots})

    def _conv_WhileStatement(self, node: dict) -> AstNode:
        return AstNode("WhileStatement",
                       [self.convert(node["test"]), self.convert(node["body"])],
                       _span(node), "")

    def _conv_CallExpression(self, node: dict) -> AstNode:
        children = [self.convert(node["callee"])]
        children.extend(self.convert(a) for a in node.get("arguments", [])
                        if _is_node(a))
        return AstNode("CallExpression", children, _span(node), "")

    def _conv_AssignmentExpression(self, node: dict) -> AstNode:
        children = [self.convert(node["left"]), self.convert(node["right"])]
        return AstNode("AssignmentExpression", children, _span(node), "",
                       {"operator": node.get("operator", "=")})

    def _conv_TemplateLiteral(self, node: dict) -> AstNode:
        # Mirror the native parser: templates lower to string concatenation.
        span = _span(node)
        quasis = [q.get("value", {}).get("cooked", "") or ""
                  for q in node.get("quasis", [])]
        exprs = [self.convert(e) for e in node.get("expressions", [])
                 if _is_node(e)]
        if not exprs:
            text = quasis[0] if quasis else ""
            return AstNode("Literal", [], span, "", {"value": text})
        while len(quasis) < len(exprs) + 1:
            quasis.append("")
        acc = AstNode("Literal", [], span, "", {"value": quasis[0]})
        for idx, expr in enumerate(exprs):
            acc = AstNode("BinaryExpression", [acc, expr], span, "",
                          {"operator": "+"})
            tail = AstNode("Literal", [], span, "", {"value": quasis[idx + 1]})
            acc = AstNode("BinaryExpression", [acc, tail], span, "",
                          {"operator": "+"})
        return acc

    def _conv_TaggedTemplateExpression(self, node: dict) -> AstNode:
        children = [self.convert(node["tag"]), self.convert(node["quasi"])]
        return self._opaque(node, children)

    # -- explicit opaque shapes (mirror the native parser) -------------

    def _conv_EmptyStatement(self, node: dict) -> AstNode:
        return self._opaque(node, [])

    def _conv_DebuggerStatement(self, node: dict) -> AstNode:
        return self._opaque(node, [])

    def _conv_ThrowStatement(self, node: dict) -> AstNode:
        return self._opaque(node, self._children_of(node, ["argument"]))

    def _conv_DoWhileStatement(self, node: dict) -> AstNode:
        return self._opaque(node, self._children_of(node, ["body", "test"]))

    def _conv_ForInStatement(self, node: dict) -> AstNode:
        return self._opaque(node, self._children_of(node, ["left", "right", "body"]))

    def _conv_ForOfStatement(self, node: dict) -> AstNode:
        return self._opaque(node, self._children_of(node, ["left", "right", "body"]))

    def _conv_SwitchStatement(self, node: dict) -> AstNode:
        return self._opaque(node, self._children_of(node, ["discriminant", "cases"]))

    def _conv_SwitchCase(self, node: dict) -> AstNode:
        return self._opaque(node, self._children_of(node, ["test", "consequent"]))

    def _conv_TryStatement(self, node: dict) -> AstNode:
        return self._opaque(node, self._children_of(
            node, ["block", "handler", "finalizer"]))

    def _conv_CatchClause(self, node: dict) -> AstNode:
        return self._opaque(node, self._children_of(node, ["param", "body"]))

    def _conv_LabeledStatement(self, node: dict) -> AstNode:
        return self._opaque(node, self._children_of(node, ["label", "body"]))

    def _conv_BreakStatement(self, node: dict) -> AstNode:
        return self._opaque(node, self._children_of(node, ["label"]))

    def _conv_ContinueStatement(self, node: dict) -> AstNode:
        return self._opaque(node, self._children_of(node, ["label"]))

    def _conv_WithStatement(self, node: dict) -> AstNode:
        return self._opaque(node, self._children_of(node, ["object", "body"]))

    def _conv_SequenceExpression(self, node: dict) -> AstNode:
        return self._opaque(node, self._children_of(node, ["expressions"]))

    def _conv_ConditionalExpression(self, node: dict) -> AstNode:
        return self._opaque(node, self._children_of(
            node, ["test", "consequent", "alternate"]))

    def _conv_UnaryExpression(self, node: dict) -> AstNode:
        return self._opaque(node, self._children_of(node, ["argument"]))

    def _conv_UpdateExpression(self, node: dict) -> AstNode:
        return self._opaque(node, self._children_of(node, ["argument"]))

    def _conv_NewExpression(self, node: dict) -> AstNode:
        return self._opaque(node, self._children_of(node, ["callee", "arguments"]))

    def _conv_SpreadElement(self, node: dict) -> AstNode:
        return self._opaque(node, self._children_of(node, ["argument"]))

    def _conv_RestElement(self, node: dict) -> AstNode:
        return self._opaque(node, self._children_of(node, ["argument"]))

    def _conv_AssignmentPattern(self, node: dict) -> AstNode:
        return self._opaque(node, self._children_of(node, ["left", "right"]))

    def _conv_ObjectPattern(self, node: dict) -> AstNode:
        return self._opaque(node, self._children_of(node, ["properties"]))

    def _conv_ArrayPattern(self, node: dict) -> AstNode:
        return self._opaque(node, self._children_of(node, ["elements"]))


def import_estree(json_text: str) -> AstNode:
    """Convert an ESTree JSON document into the native AST.

    Raises SchemaError when the document is not an ESTree program.
    """
    try:
        doc = json.loads(json_text)
    except (json.JSONDecodeError, UnicodeDecodeError) as err:
        raise SchemaError(f"not a JSON document: {err}") from err
    if not isinstance(doc, dict) or doc.get("type") != "Program":
        raise SchemaError("document root is not an ESTree Program")
    root = _Importer().convert(doc)
    number_nodes(root)
    return root
