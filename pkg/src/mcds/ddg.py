"""Data dependency graph construction over a scope chain.

Walks every scope's node list once and adds Set edges where a node changes
an entity's value (assignments, property writes, returns, setData) and Use
edges where values are referenced into calls and expressions. Edge
direction always follows the data: an edge src -> dst means dst receives
src's value.

Platform API calls (member calls rooted at names the file never binds,
e.g. ``wx.request``) get synthetic return/argument endpoint entities; the
taint layer classifies those endpoints against the source/sink tables.

Built-in propagation (push, concat, JSON.parse, ...) is a configurable
allowlist. When user code shadows one of these names with its own binding
the call resolves to the user entity instead, so the allowlist is only
consulted for genuinely unresolved receivers; shadowing a builtin *method
name* on a resolved object is modeled as propagation regardless, which is
a documented source of over-taint.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .jsast import AstNode, FUNCTION_KINDS, Span, member_property_name, static_member_path
from .scopes import CodeEntity, ContainerInfo, Scope, ScopeChain

SET = "Set"
USE = "Use"

VIA_ASSIGNMENT = "Assignment"
VIA_CALL = "Call"
VIA_PROPERTY = "Property"
VIA_RETURN = "Return"
VIA_SETDATA = "SetData"
VIA_BUILTIN = "BuiltinPropagation"


@dataclass
class BuiltinRules:
    """Propagation behaviour for well-known built-in helpers."""

    # method(args) mutates the receiver: argument -> receiver
    receiver_mutators: frozenset = frozenset({"push", "unshift"})
    # method() derives a value from the receiver: receiver (+args) -> result
    result_producers: frozenset = frozenset(
        {"concat", "join", "slice", "split", "toString"})
    # fully-qualified transforms: argument -> result
    global_transforms: frozenset = frozenset({"JSON.stringify", "JSON.parse"})


@dataclass
class DepEdge:
    src: int
    dst: int
    kind: str  # Set | Use
    via: str
    site: Span


@dataclass
class ApiCall:
    """A call through an unresolved dotted name, kept as flow endpoints."""

    name: str
    node_id: int
    site: Span
    ret_id: int
    arg_id: int


@dataclass
class Diagnostic:
    message: str
    line: int
    col: int

    def as_dict(self) -> dict:
        return {"message": self.message, "line": self.line, "col": self.col}


class DataDependencyGraph:
    def __init__(self, chain: ScopeChain):
        self.chain = chain
        self.file_id = chain.file_id
        # entity table extends the chain's without mutating it
        self.entities: dict[int, CodeEntity] = {
            e.entity_id: e for e in chain.entities}
        self._next_id = len(chain.entities)
        self.edges: list[DepEdge] = []
        self.adjacency: dict[int, list[int]] = {}
        self._edge_seen: set[tuple] = set()
        self.slots: dict[tuple[int, str], int] = {}
        self.return_slots: dict[int, int] = {}
        self.aliases: dict[int, int] = {}
        self.api_calls: list[ApiCall] = []
        self.diagnostics: list[Diagnostic] = []
        self.frozen = False

    # -- entity management ----------------------------------------------

    def new_entity(self, kind: str, name: str, span: Span,
                   owner_scope: int, implicit: bool = False) -> CodeEntity:
        if self.frozen:
            raise RuntimeError("graph is frozen")
        entity = CodeEntity(self._next_id, kind, name, span, owner_scope,
                            implicit)
        self.entities[entity.entity_id] = entity
        self._next_id += 1
        return entity

    def entity(self, entity_id: int) -> CodeEntity:
        return self.entities[entity_id]

    def add_edge(self, src: int, dst: int, kind: str, via: str,
                 site: Span) -> None:
        if self.frozen:
            raise RuntimeError("graph is frozen")
        if src == dst and via != VIA_BUILTIN:
            return
        key = (src, dst, kind, via, site.start_line, site.start_col)
        if key in self._edge_seen:
            return
        self._edge_seen.add(key)
        self.edges.append(DepEdge(src, dst, kind, via, site))
        self.adjacency.setdefault(src, []).append(dst)

    def slot_for(self, owner: int, name: str, site: Span,
                 write: bool) -> int:
        """Property slot entity for (owner, name), created on first use.

        Writes add a field->aggregate edge so tainting a field marks the
        owner; reads add aggregate->field so coarse writes reach field
        reads.
        """
        owner = self.aliases.get(owner, owner)
        key = (owner, name)
        slot_id = self.slots.get(key)
        if slot_id is None:
            owner_ent = self.entities[owner]
            slot = self.new_entity("PropertySlot", f"{owner_ent.name}.{name}",
                                   site, owner_ent.owner_scope)
            slot_id = slot.entity_id
            self.slots[key] = slot_id
        if write:
            self.add_edge(slot_id, owner, SET, VIA_PROPERTY, site)
        else:
            self.add_edge(owner, slot_id, USE, VIA_PROPERTY, site)
        return slot_id

    def return_slot(self, function_entity: int, site: Span) -> int:
        slot_id = self.return_slots.get(function_entity)
        if slot_id is None:
            fname = self.entities[function_entity].name
            owner_scope = self.entities[function_entity].owner_scope
            slot = self.new_entity("PropertySlot", f"{fname}.<return>",
                                   site, owner_scope)
            slot_id = slot.entity_id
            self.return_slots[function_entity] = slot_id
        return slot_id

    # -- queries ----------------------------------------------------------

    def reachable(self, from_id: int) -> set[int]:
        """Forward closure over Set and Use edges; safe on cycles."""
        if from_id not in self.entities:
            raise KeyError(from_id)
        visited = {from_id}
        frontier = [from_id]
        while frontier:
            node = frontier.pop()
            for nxt in self.adjacency.get(node, ()):
                if nxt not in visited:
                    visited.add(nxt)
                    frontier.append(nxt)
        return visited

    def search(self, from_id: int) -> dict[int, int]:
        """BFS predecessor map used to recover source->sink paths."""
        pred: dict[int, int] = {from_id: from_id}
        queue = [from_id]
        while queue:
            node = queue.pop(0)
            for nxt in self.adjacency.get(node, ()):
                if nxt not in pred:
                    pred[nxt] = node
                    queue.append(nxt)
        return pred

    def path_to(self, pred: dict[int, int], target: int) -> list[int]:
        path = [target]
        while pred[path[-1]] != path[-1]:
            path.append(pred[path[-1]])
        path.reverse()
        return path

    def export_edges(self) -> str:
        """Line-oriented edge dump: src, dst, kind, via, file:line."""
        lines = []
        for edge in self.edges:
            lines.append(f"{edge.src}\t{edge.dst}\t{edge.kind}\t{edge.via}"
                         f"\t{self.file_id}:{edge.site.start_line}")
        return "\n".join(lines) + ("\n" if lines else "")


class _DdgBuilder:
    def __init__(self, chain: ScopeChain, builtins: BuiltinRules):
        self.chain = chain
        self.g = DataDependencyGraph(chain)
        self.builtins = builtins
        self._memo: dict[int, list[int]] = {}
        self._containers_by_call: dict[int, ContainerInfo] = {
            c.call_node_id: c for c in chain.containers}
        self._containers_by_object: dict[int, ContainerInfo] = {
            c.object_node_id: c for c in chain.containers}
        self._implicit: dict[str, int] = {}
        self._function_nodes: dict[int, int] = {
            chain.scopes[scope_id].origin_node.node_id: entity_id
            for entity_id, scope_id in chain.function_scopes.items()}

    # -- top level -------------------------------------------------------

    def build(self) -> DataDependencyGraph:
        for scope in self.chain.scopes:
            for node in scope.node_list:
                self._process(node, scope)
            self._finish_arrow_body(scope)
        self.g.frozen = True
        return self.g

    def _finish_arrow_body(self, scope: Scope) -> None:
        origin = scope.origin_node
        if origin.kind != "ArrowFunctionExpression" or not origin.info.get("expression"):
            return
        if scope.origin_entity is None:
            return
        body = origin.children[origin.info["body_idx"]]
        slot = self.g.return_slot(scope.origin_entity, body.span)
        for value in self._values(body, scope):
            self.g.add_edge(value, slot, SET, VIA_RETURN, body.span)

    def _process(self, node: AstNode, scope: Scope) -> None:
        kind = node.kind
        if kind == "VariableDeclaration":
            self._process_var_declaration(node, scope)
        elif kind == "ReturnStatement":
            self._process_return(node, scope)
        elif kind in ("AssignmentExpression", "CallExpression",
                      "ObjectExpression", "ArrayExpression",
                      "BinaryExpression", "LogicalExpression",
                      "MemberExpression"):
            self._values(node, scope)

    # -- resolution helpers ------------------------------------------------

    def _resolve(self, name: str, scope: Scope) -> Optional[int]:
        entity = self.chain.resolve(name, scope.scope_id)
        if entity is not None:
            return entity.entity_id
        implicit = self._implicit.get(name)
        return implicit

    def _resolve_or_create(self, name: str, scope: Scope,
                           site: Span) -> int:
        found = self._resolve(name, scope)
        if found is not None:
            return found
        # sloppy-mode write to an unbound name: implicit file-scope entity
        entity = self.g.new_entity("Variable", name, site, 0, implicit=True)
        self._implicit[name] = entity.entity_id
        return entity.entity_id

    def _function_behind(self, entity_id: int) -> Optional[int]:
        """Follow a variable to the single function stored in it, if any."""
        entity = self.g.entities[entity_id]
        if entity.kind == "Function":
            return entity_id
        if entity.kind not in ("Variable", "Parameter"):
            return None
        sources = [e.src for e in self.g.edges
                   if e.dst == entity_id and e.kind == SET]
        functions = [s for s in sources
                     if self.g.entities[s].kind == "Function"]
        if len(functions) == 1 and len(sources) == 1:
            return functions[0]
        return None

    def _diag(self, message: str, span: Span) -> None:
        self.g.diagnostics.append(
            Diagnostic(message, span.start_line, span.start_col))

    # -- statement handlers --------------------------------------------------

    def _process_var_declaration(self, node: AstNode, scope: Scope) -> None:
        if node.node_id in self._memo:
            return
        self._memo[node.node_id] = []
        for id_idx, init_idx in node.info.get("declarators", []):
            target_node = node.children[id_idx]
            if target_node.kind != "Identifier":
                if init_idx is not None:
                    self._values(node.children[init_idx], scope)
                continue
            target = self._resolve(target_node.info["name"], scope)
            if target is None or init_idx is None:
                continue
            init = node.children[init_idx]
            self._bind_value(init, target, scope, node.span)

    def _bind_value(self, init: AstNode, target: int, scope: Scope,
                    site: Span) -> None:
        """Assign ``init``'s value into entity ``target``."""
        if init.kind == "ObjectExpression":
            self._process_object(init, scope, bound=target)
            return
        if init.kind == "Identifier" and init.info["name"] == "this":
            resolved = self._resolve("this", scope)
            if resolved is not None:
                self.g.aliases[target] = self.g.aliases.get(resolved, resolved)
        for value in self._values(init, scope):
            self.g.add_edge(value, target, SET, VIA_ASSIGNMENT, site)

    def _process_return(self, node: AstNode, scope: Scope) -> None:
        if node.node_id in self._memo:
            return
        self._memo[node.node_id] = []
        if scope.origin_entity is None:
            return  # top-level return: nothing to bind
        slot = self.g.return_slot(scope.origin_entity, node.span)
        for child in node.children:
            for value in self._values(child, scope):
                self.g.add_edge(value, slot, SET, VIA_RETURN, node.span)

    # -- expression values -----------------------------------------------------

    def _values(self, node: AstNode, scope: Scope) -> list[int]:
        cached = self._memo.get(node.node_id)
        if cached is not None:
            return cached
        self._memo[node.node_id] = []  # cycle guard
        result = self._compute_values(node, scope)
        self._memo[node.node_id] = result
        return result

    def _compute_values(self, node: AstNode, scope: Scope) -> list[int]:
        kind = node.kind
        if kind == "Identifier":
            resolved = self._resolve(node.info["name"], scope)
            return [resolved] if resolved is not None else []
        if kind == "Literal":
            return []
        if kind in FUNCTION_KINDS:
            entity = self._function_entity_of(node)
            return [entity] if entity is not None else []
        if kind == "MemberExpression":
            return self._member_values(node, scope, write=False)
        if kind == "CallExpression":
            return self._process_call(node, scope)
        if kind == "ObjectExpression":
            return [self._process_object(node, scope)]
        if kind == "ArrayExpression":
            return [self._process_array(node, scope)]
        if kind in ("BinaryExpression", "LogicalExpression"):
            return [self._expression_slot(node, scope)]
        if kind == "AssignmentExpression":
            return self._process_assignment(node, scope)
        if kind == "Opaque":
            values: list[int] = []
            for child in node.children:
                values.extend(self._values(child, scope))
            return values
        return []

    def _function_entity_of(self, node: AstNode) -> Optional[int]:
        return self._function_nodes.get(node.node_id)

    def _expression_slot(self, node: AstNode, scope: Scope) -> int:
        op = node.info.get("operator", "?")
        slot = self.g.new_entity(
            "ExprResult",
            f"<{node.kind[:-10].lower()} {op}@{node.span.start_line}"
            f":{node.span.start_col}>",
            node.span, scope.scope_id)
        for child in node.children:
            for value in self._values(child, scope):
                self.g.add_edge(value, slot.entity_id, USE, VIA_ASSIGNMENT,
                                node.span)
        return slot.entity_id

    def _member_values(self, node: AstNode, scope: Scope,
                       write: bool) -> list[int]:
        owners = self._values(node.children[0], scope)
        if not owners:
            return []
        prop = member_property_name(node)
        values = []
        for owner in owners:
            if prop is None:
                # computed access: fall back to the owner entity
                values.append(self.g.aliases.get(owner, owner))
            else:
                values.append(self.g.slot_for(owner, prop, node.span, write))
        return values

    def _process_assignment(self, node: AstNode, scope: Scope) -> list[int]:
        left, right = node.children[0], node.children[1]
        targets: list[int] = []
        if left.kind == "Identifier":
            targets = [self._resolve_or_create(left.info["name"], scope,
                                               left.span)]
        elif left.kind == "MemberExpression":
            targets = self._member_values(left, scope, write=True)
        else:
            self._diag("assignment target not modeled", left.span)
        if not targets:
            self._values(right, scope)
            return []
        for target in targets:
            self._bind_value(right, target, scope, node.span)
        return targets

    def _process_object(self, node: AstNode, scope: Scope,
                        bound: Optional[int] = None) -> int:
        cached = self._memo.get(node.node_id)
        if cached:
            return cached[0]
        container = self._containers_by_object.get(node.node_id)
        if container is not None and bound is None:
            bound = container.entity_id
        if bound is not None:
            owner = self.g.aliases.get(bound, bound)
        else:
            owner = self.g.new_entity(
                "Object",
                f"<object@{node.span.start_line}:{node.span.start_col}>",
                node.span, scope.scope_id).entity_id
        self._memo[node.node_id] = [owner]
        for prop in node.children:
            if prop.kind != "Property" or len(prop.children) != 2:
                for value in self._values(prop, scope):
                    self.g.add_edge(value, owner, SET, VIA_PROPERTY, prop.span)
                continue
            self._memo[prop.node_id] = []
            key, value_node = prop.children
            key_name = self._static_key(key)
            if key_name is None:
                for value in self._values(value_node, scope):
                    self.g.add_edge(value, owner, SET, VIA_PROPERTY, prop.span)
                continue
            slot = self.g.slot_for(owner, key_name, prop.span, write=True)
            if value_node.kind == "ObjectExpression":
                self._process_object(value_node, scope, bound=slot)
                continue
            for value in self._values(value_node, scope):
                self.g.add_edge(value, slot, SET, VIA_PROPERTY, prop.span)
        return owner

    @staticmethod
    def _static_key(key: AstNode) -> Optional[str]:
        if key.info.get("computed_key"):
            return None
        if key.kind == "Identifier":
            return key.info["name"]
        if key.kind == "Literal":
            value = key.info.get("value")
            if isinstance(value, (str, int)):
                return str(value)
        return None

    def _process_array(self, node: AstNode, scope: Scope) -> int:
        cached = self._memo.get(node.node_id)
        if cached:
            return cached[0]
        owner = self.g.new_entity(
            "Object", f"<array@{node.span.start_line}:{node.span.start_col}>",
            node.span, scope.scope_id).entity_id
        self._memo[node.node_id] = [owner]
        for element in node.children:
            for value in self._values(element, scope):
                self.g.add_edge(value, owner, SET, VIA_PROPERTY, element.span)
        return owner

    # -- calls ---------------------------------------------------------------

    def _process_call(self, node: AstNode, scope: Scope) -> list[int]:
        callee = node.children[0]
        args = node.children[1:]

        container = self._containers_by_call.get(node.node_id)
        if container is not None:
            self._process_object(node.children[1], scope,
                                 bound=container.entity_id)
            for extra in args[1:]:
                self._values(extra, scope)
            return [container.entity_id]

        if callee.kind == "Identifier":
            return self._call_identifier(node, callee, args, scope)
        if callee.kind == "MemberExpression":
            return self._call_member(node, callee, args, scope)
        if callee.kind in FUNCTION_KINDS:
            fentity = self._function_entity_of(callee)
            if fentity is not None:  # immediately-invoked function
                return self._call_user_function(node, fentity, args, scope)
        for arg in args:
            self._values(arg, scope)
        self._diag("call through unsupported callee", node.span)
        return []

    def _call_identifier(self, node: AstNode, callee: AstNode,
                         args: list[AstNode], scope: Scope) -> list[int]:
        name = callee.info["name"]
        resolved = self._resolve(name, scope)
        if resolved is not None:
            target = self._function_behind(resolved)
            if target is not None:
                return self._call_user_function(node, target, args, scope)
            for arg in args:
                self._values(arg, scope)
            self._diag(f"call through unresolvable value '{name}'", node.span)
            return []
        for arg in args:
            self._values(arg, scope)
        self._diag(f"call to unresolved name '{name}'", node.span)
        return []

    def _call_user_function(self, node: AstNode, fentity: int,
                            args: list[AstNode], scope: Scope) -> list[int]:
        fscope = self.chain.scopes[self.chain.function_scopes[fentity]]
        params = fscope.param_entities
        for idx, arg in enumerate(args):
            values = self._values(arg, scope)
            if idx < len(params):
                for value in values:
                    self.g.add_edge(value, params[idx], USE, VIA_CALL,
                                    arg.span)
        return [self.g.return_slot(fentity, node.span)]

    def _call_member(self, node: AstNode, callee: AstNode,
                     args: list[AstNode], scope: Scope) -> list[int]:
        # the callee member itself is consumed by the call, not read as data
        self._memo.setdefault(callee.node_id, [])
        prop = member_property_name(callee)
        receiver_node = callee.children[0]
        root = self._member_root(callee)
        root_resolved = (root is not None
                         and self._resolve(root, scope) is not None)

        if root_resolved:
            receivers = self._values(receiver_node, scope)
            if prop == "setData":
                self._apply_setdata(node, receivers, args, scope)
                return []
            if prop in self.builtins.receiver_mutators:
                for arg in args:
                    for value in self._values(arg, scope):
                        for receiver in receivers:
                            self.g.add_edge(value, receiver, SET, VIA_BUILTIN,
                                            node.span)
                return list(receivers)
            if prop in self.builtins.result_producers:
                result = self.g.new_entity(
                    "ExprResult", f"<{prop}@{node.span.start_line}"
                    f":{node.span.start_col}>",
                    node.span, scope.scope_id).entity_id
                for receiver in receivers:
                    self.g.add_edge(receiver, result, SET, VIA_BUILTIN,
                                    node.span)
                for arg in args:
                    for value in self._values(arg, scope):
                        self.g.add_edge(value, result, SET, VIA_BUILTIN,
                                        node.span)
                return [result]
            for arg in args:
                self._values(arg, scope)
            self._diag(f"method call '.{prop}' on resolved object not modeled",
                       node.span)
            return []

        dotted = static_member_path(callee)
        if dotted is None:
            for arg in args:
                self._values(arg, scope)
            self._diag("computed callee not modeled", node.span)
            return []
        if dotted in self.builtins.global_transforms:
            result = self.g.new_entity(
                "ExprResult", f"<{dotted}@{node.span.start_line}"
                f":{node.span.start_col}>",
                node.span, scope.scope_id).entity_id
            for arg in args:
                for value in self._values(arg, scope):
                    self.g.add_edge(value, result, SET, VIA_BUILTIN, node.span)
            return [result]
        return self._api_call(node, dotted, args, scope)

    @staticmethod
    def _member_root(node: AstNode) -> Optional[str]:
        current = node
        while current.kind == "MemberExpression":
            current = current.children[0]
        if current.kind == "Identifier":
            return current.info["name"]
        return None

    def _apply_setdata(self, node: AstNode, receivers: list[int],
                       args: list[AstNode], scope: Scope) -> None:
        """``recv.setData(obj)`` assigns into ``recv.data`` slots."""
        if not receivers:
            self._diag("setData receiver not resolved", node.span)
            return
        for receiver in receivers:
            data_slot = self.g.slot_for(receiver, "data", node.span,
                                        write=True)
            if not args:
                continue
            payload = args[0]
            if payload.kind == "ObjectExpression":
                self._memo[payload.node_id] = [data_slot]
                for prop in payload.children:
                    if prop.kind != "Property" or len(prop.children) != 2:
                        continue
                    self._memo[prop.node_id] = []
                    key, value_node = prop.children
                    key_name = self._static_key(key)
                    values = self._values(value_node, scope)
                    if key_name is None:
                        for value in values:
                            self.g.add_edge(value, data_slot, SET,
                                            VIA_SETDATA, prop.span)
                        continue
                    key_slot = self.g.slot_for(data_slot, key_name,
                                               prop.span, write=True)
                    for value in values:
                        self.g.add_edge(value, key_slot, SET, VIA_SETDATA,
                                        prop.span)
            else:
                for value in self._values(payload, scope):
                    self.g.add_edge(value, data_slot, SET, VIA_SETDATA,
                                    node.span)
            for extra in args[1:]:
                self._values(extra, scope)

    def _api_call(self, node: AstNode, dotted: str, args: list[AstNode],
                  scope: Scope) -> list[int]:
        line, col = node.span.start_line, node.span.start_col
        ret = self.g.new_entity("ApiReturn", f"{dotted}@{line}:{col}",
                                node.span, scope.scope_id).entity_id
        arg_ep = self.g.new_entity("ApiArgument", f"{dotted}(args)@{line}:{col}",
                                   node.span, scope.scope_id).entity_id
        for arg in args:
            for value in self._values(arg, scope):
                self.g.add_edge(value, arg_ep, USE, VIA_CALL, arg.span)
            if arg.kind == "ObjectExpression":
                self._wire_async_callbacks(arg, ret, scope)
        self.g.api_calls.append(
            ApiCall(dotted, node.node_id, node.span, ret, arg_ep))
        return [ret]

    def _wire_async_callbacks(self, payload: AstNode, ret: int,
                              scope: Scope) -> None:
        """success/complete callbacks receive the API's return endpoint."""
        for prop in payload.children:
            if prop.kind != "Property" or len(prop.children) != 2:
                continue
            key_name = self._static_key(prop.children[0])
            value_node = prop.children[1]
            if key_name not in ("success", "complete"):
                continue
            if value_node.kind not in FUNCTION_KINDS:
                continue
            fentity = self._function_entity_of(value_node)
            if fentity is None:
                continue
            fscope = self.chain.scopes[self.chain.function_scopes[fentity]]
            if fscope.param_entities:
                self.g.add_edge(ret, fscope.param_entities[0], SET, VIA_CALL,
                                value_node.span)


def build_ddg(chain: ScopeChain,
              builtins: Optional[BuiltinRules] = None) -> DataDependencyGraph:
    """Build and freeze the data dependency graph for one file's chain."""
    return _DdgBuilder(chain, builtins or BuiltinRules()).build()
