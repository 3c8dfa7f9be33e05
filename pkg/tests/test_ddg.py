import random

from mcds.ddg import SET, USE, VIA_SETDATA, build_ddg
from mcds.jsparser import parse_js
from mcds.scopes import build_scope_chain

from oracle_utils import matrix_closure, random_graph, synthetic_graph

FIG_FLOW = """\
var t = "";
Page({
  data: { location: "" },
  searchLocation: function () {
    var e = this;
    wx.chooseLocation({
      success: function (t) {
        e.setData({ location: t });
      }
    });
  },
  submit: function () {
    wx.request({ url: "https://x.example", data: this.data.location });
  }
});
"""


def graph_for(source, file_id="test.js"):
    chain = build_scope_chain(parse_js(source), file_id)
    return build_ddg(chain)


def edge_names(graph):
    return [(graph.entity(e.src).name, graph.entity(e.dst).name,
             e.kind, e.via) for e in graph.edges]


class TestEdges:
    def test_literal_initializer_adds_no_inter_entity_edge(self):
        graph = graph_for("var a = 1")
        assert graph.edges == []

    def test_assignment_right_to_left(self):
        graph = graph_for("var a = 1; var b = a;")
        assert ("a", "b", SET, "Assignment") in edge_names(graph)

    def test_setdata_assigns_into_receiver_data(self):
        graph = graph_for("Page({ go: function (b) { this.setData(b); } });")
        names = edge_names(graph)
        assert any(src == "b" and dst.endswith(".data")
                   and kind == SET and via == VIA_SETDATA
                   for src, dst, kind, via in names)

    def test_setdata_object_literal_is_field_sensitive(self):
        graph = graph_for(
            "Page({ go: function (b) { this.setData({ phone: b }); } });")
        assert any(src == "b" and dst.endswith(".data.phone")
                   for src, dst, _, _ in edge_names(graph))

    def test_return_feeds_return_slot_and_call_site(self):
        graph = graph_for(
            "function f(x) { return x; }\nvar a = 1;\nvar b = f(a);")
        names = edge_names(graph)
        assert ("a", "x", USE, "Call") in names
        assert ("x", "f.<return>", SET, "Return") in names
        assert ("f.<return>", "b", SET, "Assignment") in names

    def test_builtin_push_propagates_argument_to_receiver(self):
        graph = graph_for("var a = []; var b = 1; a.push(b);")
        assert any(src == "b" and dst == "a" and via == "BuiltinPropagation"
                   for src, dst, _, via in edge_names(graph))

    def test_json_stringify_propagates(self):
        graph = graph_for("var a = 1; var s = JSON.stringify(a);")
        names = edge_names(graph)
        assert any(src == "a" and dst.startswith("<JSON.stringify")
                   for src, dst, _, _ in names)
        assert any(src.startswith("<JSON.stringify") and dst == "s"
                   for src, dst, _, _ in names)

    def test_async_callback_receives_api_return(self):
        graph = graph_for(
            "wx.getLocation({ success: function (res) { use(res); } });")
        assert any(src.startswith("wx.getLocation@") and dst == "res"
                   and via == "Call" for src, dst, _, via in edge_names(graph))

    def test_fail_callback_receives_nothing(self):
        graph = graph_for(
            "wx.getLocation({ fail: function (err) { use(err); } });")
        assert not any(dst == "err" for _, dst, _, _ in edge_names(graph))

    def test_unresolvable_callee_is_diagnostic_not_edge(self):
        graph = graph_for("mystery(secret);")
        assert any("unresolved" in d.message for d in graph.diagnostics)
        assert graph.edges == []

    def test_implicit_global_created_on_write(self):
        graph = graph_for("function f() { leaked = 1; }\nvar x = leaked;")
        implicit = [e for e in graph.entities.values()
                    if e.name == "leaked" and e.implicit]
        assert len(implicit) == 1
        assert implicit[0].owner_scope == 0

    def test_logical_operands_use_result_slot(self):
        graph = graph_for("var a = 1; var b = 2; var c = a && b;")
        names = edge_names(graph)
        assert any(src == "a" and dst.startswith("<logical")
                   and kind == USE for src, dst, kind, _ in names)
        assert any(src.startswith("<logical") and dst == "c"
                   for src, dst, _, _ in names)

    def test_edge_determinism(self):
        source = FIG_FLOW
        first = graph_for(source)
        second = graph_for(source)
        assert edge_names(first) == edge_names(second)

    def test_frozen_after_build(self):
        graph = graph_for("var a = 1;")
        assert graph.frozen
        try:
            graph.add_edge(0, 0, SET, "BuiltinPropagation",
                           next(iter(graph.entities.values())).decl_span)
            raised = False
        except RuntimeError:
            raised = True
        assert raised

    def test_every_edge_endpoint_in_entity_table(self):
        graph = graph_for(FIG_FLOW)
        for edge in graph.edges:
            assert edge.src in graph.entities
            assert edge.dst in graph.entities

    def test_no_self_edges_outside_builtin_propagation(self):
        for source in (FIG_FLOW, "var x = 1; x = x;", "a = a;"):
            graph = graph_for(source)
            for edge in graph.edges:
                assert edge.src != edge.dst or \
                    edge.via == "BuiltinPropagation"


class TestRedLine:
    def test_full_flow_path(self):
        graph = graph_for(FIG_FLOW, "pages/share/share.js")
        choose = next(c for c in graph.api_calls
                      if c.name == "wx.chooseLocation")
        request = next(c for c in graph.api_calls if c.name == "wx.request")
        pred = graph.search(choose.ret_id)
        assert request.arg_id in pred
        path = graph.path_to(pred, request.arg_id)
        names = [graph.entity(i).name for i in path]
        assert names[0].startswith("wx.chooseLocation@")
        assert names[1] == "t"
        assert names[2].endswith(".data.location")
        assert names[-1].startswith("wx.request(args)@")


class TestReachable:
    def test_single_node_reaches_itself(self):
        graph, ids = synthetic_graph(1, [])
        assert graph.reachable(ids[0]) == {ids[0]}

    def test_cycle_terminates(self):
        graph, ids = synthetic_graph(3, [(0, 1), (1, 2), (2, 0)])
        assert graph.reachable(ids[0]) == set(ids)

    def test_matrix_closure_oracle_100_graphs(self):
        rng = random.Random(20260809)
        for _ in range(100):
            n, edges = random_graph(rng)
            graph, ids = synthetic_graph(n, edges)
            closure = matrix_closure(n, edges)
            for i in range(n):
                expected = {ids[j] for j in range(n) if closure[i, j]}
                assert graph.reachable(ids[i]) == expected


class TestExport:
    def test_edge_export_format(self):
        graph = graph_for("var a = 1; var b = a;", "pages/p/p.js")
        lines = graph.export_edges().splitlines()
        assert len(lines) == len(graph.edges)
        src, dst, kind, via, site = lines[0].split("\t")
        assert int(src) in graph.entities
        assert int(dst) in graph.entities
        assert kind in ("Set", "Use")
        assert via == "Assignment"
        assert site.startswith("pages/p/p.js:")
