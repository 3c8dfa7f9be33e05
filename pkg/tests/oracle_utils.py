"""Independent oracles used by the property/acceptance tests.

These deliberately avoid the production implementations: scope resolution
is checked against a direct lexical-environment simulation on the AST, and
graph reachability against boolean-matrix transitive closure.
"""

from __future__ import annotations

import random

import numpy as np

from mcds.jsast import AstNode, FUNCTION_KINDS


# -- random nested-function program generator --------------------------------

_NAMES = ["a", "b", "t", "x", "data"]


def generate_nested_program(seed: int) -> str:
    rng = random.Random(seed)
    counter = [0]

    def block(depth: int, indent: str) -> list[str]:
        lines = []
        for _ in range(rng.randint(2, 4)):
            roll = rng.random()
            if roll < 0.35:
                name = rng.choice(_NAMES)
                lines.append(f"{indent}var {name} = {rng.randint(0, 9)};")
            elif roll < 0.6:
                counter[0] += 1
                name = rng.choice(_NAMES)
                lines.append(f"{indent}var read{counter[0]} = {name};")
            elif depth < 3:
                params = rng.sample(_NAMES, rng.randint(0, 2))
                counter[0] += 1
                fname = f"f{counter[0]}"
                lines.append(f"{indent}function {fname}({', '.join(params)}) {{")
                lines.extend(block(depth + 1, indent + "  "))
                lines.append(f"{indent}}}")
            else:
                counter[0] += 1
                name = rng.choice(_NAMES)
                lines.append(f"{indent}var read{counter[0]} = {name};")
        return lines

    return "\n".join(block(0, "")) + "\n"


# -- lexical environment simulator -------------------------------------------


def simulate_resolutions(ast: AstNode) -> dict[int, object]:
    """Reference Identifier node_id -> declaring span (or None if unbound).

    Reference sites are the plain-identifier initializers of variable
    declarations (the shape the generator emits). The simulation keeps a
    chain of environments keyed by name, with function-scoped hoisting:
    all var/function/parameter declarations of a function body are visible
    throughout that body.
    """
    results: dict[int, object] = {}

    def declarations(fn_node: AstNode) -> dict[str, object]:
        env: dict[str, object] = {}
        if fn_node.kind in FUNCTION_KINDS:
            for idx in fn_node.info.get("param_idxs", ()):
                param = fn_node.children[idx]
                if param.kind == "Identifier":
                    env.setdefault(param.info["name"], param.span)
            name_idx = fn_node.info.get("name_idx")
            if fn_node.kind == "FunctionExpression" and name_idx is not None:
                env.setdefault(fn_node.children[name_idx].info["name"],
                               fn_node.span)
            body = [fn_node.children[fn_node.info["body_idx"]]]
        else:
            body = fn_node.children

        def hoist(node: AstNode) -> None:
            if node.kind in FUNCTION_KINDS:
                return  # a nested function gets its own environment
            if node.kind == "VariableDeclaration":
                for id_idx, _ in node.info.get("declarators", ()):
                    target = node.children[id_idx]
                    if target.kind == "Identifier":
                        env.setdefault(target.info["name"], target.span)
            for child in node.children:
                if child.kind == "FunctionDeclaration":
                    name_idx = child.info.get("name_idx")
                    if name_idx is not None:
                        env.setdefault(child.children[name_idx].info["name"],
                                       child.span)
                hoist(child)

        for node in body:
            if node.kind == "FunctionDeclaration":
                name_idx = node.info.get("name_idx")
                if name_idx is not None:
                    env.setdefault(node.children[name_idx].info["name"],
                                   node.span)
            hoist(node)
        return env

    def resolve(name: str, chain: list[dict]) -> object:
        for env in reversed(chain):
            if name in env:
                return env[name]
        return None

    def walk(node: AstNode, chain: list[dict]) -> None:
        if node.kind == "VariableDeclaration":
            for id_idx, init_idx in node.info.get("declarators", ()):
                if init_idx is None:
                    continue
                init = node.children[init_idx]
                if init.kind == "Identifier":
                    results[init.node_id] = resolve(init.info["name"], chain)
        if node.kind in FUNCTION_KINDS:
            child_chain = chain + [declarations(node)]
            body = node.children[node.info["body_idx"]]
            walk_children(body, child_chain)
            return
        walk_children(node, chain)

    def walk_children(node: AstNode, chain: list[dict]) -> None:
        for child in node.children:
            walk(child, chain)

    walk_children(ast, [declarations(ast)])
    return results


# -- matrix transitive closure ------------------------------------------------


def matrix_closure(n: int, edges: list[tuple[int, int]]) -> np.ndarray:
    """Reflexive-transitive closure by repeated boolean squaring."""
    reach = np.eye(n, dtype=bool)
    for src, dst in edges:
        reach[src, dst] = True
    while True:
        nxt = reach | (reach @ reach)
        if np.array_equal(nxt, reach):
            return reach
        reach = nxt


def random_graph(rng: random.Random, max_nodes: int = 20,
                 max_edges: int = 60) -> tuple[int, list[tuple[int, int]]]:
    n = rng.randint(1, max_nodes)
    m = rng.randint(0, max_edges)
    edges = [(rng.randrange(n), rng.randrange(n)) for _ in range(m)]
    return n, edges


def synthetic_graph(n: int, edges: list[tuple[int, int]]):
    """Construct a frozen DataDependencyGraph with arbitrary edges."""
    from mcds.ddg import DataDependencyGraph
    from mcds.jsast import Span
    from mcds.scopes import ScopeChain

    chain = ScopeChain("synthetic")
    graph = DataDependencyGraph(chain)
    ids = [graph.new_entity("Variable", f"n{i}", Span(1, i, 1, i), 0).entity_id
           for i in range(n)]
    for idx, (src, dst) in enumerate(edges):
        graph.add_edge(ids[src], ids[dst], "Set", "BuiltinPropagation",
                       Span(idx + 1, 0, idx + 1, 0))
    graph.frozen = True
    return graph, ids
