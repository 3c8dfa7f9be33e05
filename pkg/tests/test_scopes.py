from mcds.jsparser import parse_js
from mcds.scopes import build_scope_chain

from oracle_utils import generate_nested_program, simulate_resolutions

SHADOWING = """\
var t = "";
Page({
  data: { location: "" },
  onLoad: function () {
    var msg = t;
  },
  searchLocation: function () {
    var e = this;
    wx.chooseLocation({
      success: function (t) {
        e.setData({ location: t });
      }
    });
  }
});
"""


def chain_for(source, file_id="test.js"):
    return build_scope_chain(parse_js(source), file_id)


class TestConstruction:
    def test_empty_program_single_root_scope(self):
        chain = chain_for("")
        assert len(chain.scopes) == 1
        entities = [chain.entities[i] for i in chain.scopes[0].entities]
        assert [e.kind for e in entities] == ["File"]

    def test_function_like_nodes_open_scopes(self):
        chain = chain_for(
            "function f(a) {}\nvar g = function (b) {};\nvar h = (c) => c;")
        assert len(chain.scopes) == 4  # root + three functions
        kinds = sorted(chain.entities[i].kind
                       for s in chain.scopes for i in s.entities)
        assert kinds.count("Function") == 3
        assert kinds.count("Parameter") == 3

    def test_anonymous_function_expressions_get_entities(self):
        chain = chain_for("wx.request({ success: function () {} });")
        functions = [e for e in chain.entities if e.kind == "Function"]
        assert len(functions) == 1
        assert functions[0].name.startswith("<anonymous@")

    def test_three_scope_levels_for_page_snippet(self):
        chain = chain_for(SHADOWING)
        assert chain.max_depth() == 3

    def test_node_partition(self):
        for source in (SHADOWING, "var a = 1; function f(x) { return x; }"):
            ast = parse_js(source)
            chain = build_scope_chain(ast, "t.js")
            assert chain.total_nodes() == ast.count()
            seen = set()
            for scope in chain.scopes:
                for node in scope.node_list:
                    assert node.node_id not in seen
                    seen.add(node.node_id)

    def test_entities_belong_to_exactly_one_scope(self):
        chain = chain_for(SHADOWING)
        owners = {}
        for scope in chain.scopes:
            for entity_id in scope.entities:
                assert entity_id not in owners
                owners[entity_id] = scope.scope_id
        for entity in chain.entities:
            assert entity.owner_scope == owners[entity.entity_id]


class TestResolve:
    def test_shadowing_parameter_wins_inside_callback(self):
        chain = chain_for(SHADOWING)
        callback_scope = next(
            s for s in chain.scopes
            if s.param_entities
            and chain.entities[s.param_entities[0]].name == "t")
        resolved = chain.resolve("t", callback_scope.scope_id)
        assert resolved.kind == "Parameter"
        outer_use_scope = next(
            s for s in chain.scopes
            if any(chain.entities[i].name == "msg" for i in s.entities))
        resolved_outer = chain.resolve("t", outer_use_scope.scope_id)
        assert resolved_outer.kind == "Variable"
        assert resolved_outer.decl_span.start_line == 1

    def test_unbound_name_resolves_to_none(self):
        chain = chain_for("var a = 1;")
        assert chain.resolve("undeclaredX", 0) is None

    def test_hoisted_function_visible_before_definition(self):
        chain = chain_for("var r = helper;\nfunction helper() {}")
        assert chain.resolve("helper", 0).kind == "Function"

    def test_this_binds_to_page_object_in_methods(self):
        chain = chain_for(SHADOWING)
        container = chain.containers[0]
        method_scope = chain.scopes[
            chain.function_scopes[container.methods["searchLocation"]]]
        resolved = chain.resolve("this", method_scope.scope_id)
        assert resolved.entity_id == container.entity_id
        assert set(container.methods) == {"onLoad", "searchLocation"}


class TestEnvironmentOracle:
    """resolve() agrees with a brute-force lexical-environment simulator
    on generated nested-function fixtures."""

    def test_fifty_generated_fixtures(self):
        checked = 0
        for seed in range(50):
            source = generate_nested_program(seed)
            ast = parse_js(source)
            chain = build_scope_chain(ast, f"gen{seed}.js")
            expected = simulate_resolutions(ast)

            scope_of_node = {}
            for scope in chain.scopes:
                for node in scope.node_list:
                    scope_of_node[node.node_id] = scope.scope_id

            for node in ast.walk():
                if node.node_id not in expected:
                    continue
                scope_id = scope_of_node[node.node_id]
                entity = chain.resolve(node.info["name"], scope_id)
                got = entity.decl_span if entity else None
                assert got == expected[node.node_id], (
                    f"seed {seed}: {node.info['name']} at "
                    f"{node.span} -> {got} != {expected[node.node_id]}")
                checked += 1
        assert checked > 200  # the generator must actually emit references


class TestDump:
    def test_golden_dump(self):
        chain = chain_for("var a = 1;\nfunction f(x) { var y = x; }", "app.js")
        assert chain.dump() == (
            "scope 0 [Program] nodes=5\n"
            "  File app.js @1:0\n"
            "  Variable a @1:4\n"
            "  Function f @2:0\n"
            "  scope 1 [FunctionDeclaration] nodes=6\n"
            "    Parameter x @2:11\n"
            "    Variable y @2:20\n"
        )
