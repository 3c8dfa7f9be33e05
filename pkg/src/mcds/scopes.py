"""Build code entities and the scope chain from an AST.

Walks the tree once: every function-like node opens a child scope, and
variable declarations, function declarations/expressions and formal
parameters become entities owned by the nearest enclosing scope. Name
resolution then walks from a scope through its parents, which gives the
shadowing behaviour JavaScript's function scoping implies (block-level
let/const are deliberately treated as function-scoped).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .jsast import AstNode, FUNCTION_KINDS, Span

# Calls to these platform containers introduce a synthetic page object
# that `this` resolves to inside the container's methods.
CONTAINER_NAMES = frozenset({"Page", "App", "Component"})

ENTITY_KINDS = ("Variable", "Function", "File", "Parameter", "PropertySlot")


@dataclass
class CodeEntity:
    entity_id: int
    kind: str
    name: str
    decl_span: Span
    owner_scope: int
    implicit: bool = False

    def __str__(self) -> str:
        return f"{self.kind} {self.name!r} (#{self.entity_id})"


@dataclass
class Scope:
    scope_id: int
    origin_node: AstNode
    parent: Optional[int]
    depth: int
    entities: list[int] = field(default_factory=list)
    node_list: list[AstNode] = field(default_factory=list)
    bindings: dict[str, int] = field(default_factory=dict)
    param_entities: list[int] = field(default_factory=list)
    origin_entity: Optional[int] = None  # function entity owning this scope

    @property
    def label(self) -> str:
        node = self.origin_node
        if node.kind == "Program":
            return "Program"
        return node.kind


@dataclass
class ContainerInfo:
    """One Page({...}) / App({...}) / Component({...}) call."""

    call_node_id: int
    entity_id: int
    object_node_id: int
    methods: dict[str, int] = field(default_factory=dict)


class ScopeChain:
    def __init__(self, file_id: str):
        self.file_id = file_id
        self.scopes: list[Scope] = []
        self.entities: list[CodeEntity] = []
        self.containers: list[ContainerInfo] = []
        self.function_scopes: dict[int, int] = {}  # function entity -> scope

    # -- construction helpers ------------------------------------------

    def new_scope(self, origin: AstNode, parent: Optional[int]) -> Scope:
        depth = 0 if parent is None else self.scopes[parent].depth + 1
        scope = Scope(len(self.scopes), origin, parent, depth)
        self.scopes.append(scope)
        return scope

    def new_entity(self, kind: str, name: str, span: Span, scope: Scope,
                   implicit: bool = False) -> CodeEntity:
        entity = CodeEntity(len(self.entities), kind, name, span,
                            scope.scope_id, implicit)
        self.entities.append(entity)
        scope.entities.append(entity.entity_id)
        return entity

    def bind(self, scope: Scope, name: str, entity: CodeEntity) -> None:
        existing = scope.bindings.get(name)
        if existing is None:
            scope.bindings[name] = entity.entity_id
            return
        # function declarations win over plain variables of the same name,
        # everything else keeps the first binding
        if self.entities[existing].kind == "Variable" and entity.kind == "Function":
            scope.bindings[name] = entity.entity_id

    # -- queries --------------------------------------------------------

    def resolve(self, name: str, from_scope: int) -> Optional[CodeEntity]:
        """Nearest entity with this name, walking up the parent chain."""
        scope_id: Optional[int] = from_scope
        while scope_id is not None:
            scope = self.scopes[scope_id]
            entity_id = scope.bindings.get(name)
            if entity_id is not None:
                return self.entities[entity_id]
            scope_id = scope.parent
        return None

    def entity(self, entity_id: int) -> CodeEntity:
        return self.entities[entity_id]

    def root(self) -> Scope:
        return self.scopes[0]

    def max_depth(self) -> int:
        return max((s.depth for s in self.scopes), default=0) + 1

    def total_nodes(self) -> int:
        return sum(len(s.node_list) for s in self.scopes)

    def dump(self) -> str:
        """Structured text report of scopes and entities, one scope per block."""
        lines: list[str] = []
        children: dict[Optional[int], list[int]] = {}
        for scope in self.scopes:
            children.setdefault(scope.parent, []).append(scope.scope_id)

        def emit(scope_id: int) -> None:
            scope = self.scopes[scope_id]
            pad = "  " * scope.depth
            lines.append(f"{pad}scope {scope.scope_id} [{scope.label}]"
                         f" nodes={len(scope.node_list)}")
            for entity_id in scope.entities:
                ent = self.entities[entity_id]
                span = ent.decl_span
                lines.append(f"{pad}  {ent.kind} {ent.name}"
                             f" @{span.start_line}:{span.start_col}")
            for child in children.get(scope_id, []):
                emit(child)

        emit(0)
        return "\n".join(lines) + "\n"


class _Builder:
    def __init__(self, chain: ScopeChain):
        self.chain = chain

    def build(self, ast: AstNode) -> None:
        root = self.chain.new_scope(ast, None)
        self.chain.new_entity("File", self.chain.file_id, ast.span, root)
        root.node_list.append(ast)
        for child in ast.children:
            self.visit(child, root, None)

    def visit(self, node: AstNode, scope: Scope,
              bind_this: Optional[CodeEntity]) -> None:
        scope.node_list.append(node)
        kind = node.kind
        if kind in FUNCTION_KINDS:
            self._visit_function(node, scope, bind_this)
            return
        if kind == "VariableDeclaration":
            self._visit_var_declaration(node, scope)
            return
        if kind == "CallExpression" and self._container_call(node):
            self._visit_container(node, scope)
            return
        for child in node.children:
            self.visit(child, scope, None)

    def _visit_var_declaration(self, node: AstNode, scope: Scope) -> None:
        declarator_ids = {id_idx for id_idx, _ in node.info.get("declarators", [])}
        for idx, child in enumerate(node.children):
            if idx in declarator_ids and child.kind == "Identifier":
                name = child.info["name"]
                if name not in scope.bindings:
                    entity = self.chain.new_entity("Variable", name,
                                                   child.span, scope)
                    self.chain.bind(scope, name, entity)
                scope.node_list.append(child)
            else:
                self.visit(child, scope, None)

    def _visit_function(self, node: AstNode, scope: Scope,
                        bind_this: Optional[CodeEntity]) -> CodeEntity:
        name_idx = node.info.get("name_idx")
        if name_idx is not None:
            fname = node.children[name_idx].info["name"]
        else:
            fname = (f"<anonymous@{node.span.start_line}"
                     f":{node.span.start_col}>")
        entity = self.chain.new_entity("Function", fname, node.span, scope)
        if node.kind == "FunctionDeclaration" and name_idx is not None:
            self.chain.bind(scope, fname, entity)

        fscope = self.chain.new_scope(node, scope.scope_id)
        fscope.origin_entity = entity.entity_id
        self.chain.function_scopes[entity.entity_id] = fscope.scope_id
        if node.kind == "FunctionExpression" and name_idx is not None:
            # a named function expression can call itself by name
            self.chain.bind(fscope, fname, entity)
        if bind_this is not None:
            fscope.bindings["this"] = bind_this.entity_id

        for idx, child in enumerate(node.children):
            if idx == name_idx:
                fscope.node_list.append(child)
                continue
            if idx in node.info.get("param_idxs", ()):
                if child.kind == "Identifier":
                    pname = child.info["name"]
                    param = self.chain.new_entity("Parameter", pname,
                                                  child.span, fscope)
                    self.chain.bind(fscope, pname, param)
                    fscope.param_entities.append(param.entity_id)
                    fscope.node_list.append(child)
                else:
                    # pattern parameter: no entity, still visit the pieces
                    self.visit(child, fscope, None)
                continue
            self.visit(child, fscope, None)
        return entity

    def _container_call(self, node: AstNode) -> bool:
        callee = node.children[0] if node.children else None
        return (callee is not None and callee.kind == "Identifier"
                and callee.info["name"] in CONTAINER_NAMES
                and len(node.children) > 1
                and node.children[1].kind == "ObjectExpression")

    def _visit_container(self, node: AstNode, scope: Scope) -> None:
        callee, obj = node.children[0], node.children[1]
        scope.node_list.append(callee)
        cname = callee.info["name"]
        container = self.chain.new_entity(
            "Variable",
            f"<{cname.lower()}-object@{node.span.start_line}>",
            node.span, scope)
        info = ContainerInfo(node.node_id, container.entity_id, obj.node_id)
        self.chain.containers.append(info)

        scope.node_list.append(obj)
        for prop in obj.children:
            if prop.kind != "Property" or len(prop.children) != 2:
                self.visit(prop, scope, None)
                continue
            scope.node_list.append(prop)
            key, value = prop.children
            scope.node_list.append(key)
            if value.kind in FUNCTION_KINDS:
                method_entity = self._record_method(value, scope, container)
                key_name = self._key_name(key)
                if key_name is not None:
                    info.methods[key_name] = method_entity.entity_id
            else:
                self.visit(value, scope, None)
        for extra in node.children[2:]:
            self.visit(extra, scope, None)

    def _record_method(self, fn: AstNode, scope: Scope,
                       container: CodeEntity) -> CodeEntity:
        scope.node_list.append(fn)
        return self._visit_function(fn, scope, container)

    @staticmethod
    def _key_name(key: AstNode) -> Optional[str]:
        if key.kind == "Identifier" and not key.info.get("computed_key"):
            return key.info["name"]
        if key.kind == "Literal" and isinstance(key.info.get("value"), str):
            return key.info["value"]
        return None


def build_scope_chain(ast: AstNode, file_id: str = "<file>") -> ScopeChain:
    """Run the entity/scope construction over a Program root."""
    if ast.kind != "Program":
        raise ValueError("build_scope_chain expects a Program root")
    chain = ScopeChain(file_id)
    _Builder(chain).build(ast)
    return chain
