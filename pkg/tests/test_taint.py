import pytest

from mcds.ddg import build_ddg
from mcds.errors import TableError
from mcds.ingest import parse_layout
from mcds.jsast import Span
from mcds.jsparser import parse_js
from mcds.scopes import ScopeChain, build_scope_chain
from mcds.taint import (COLLECT, DataPractice, SEND, SinkSpec, SourceSpec,
                        TaintFlow, USE, UiSource, find_flows,
                        flows_to_practices, load_sink_table,
                        load_source_table, resolve_ui_sources)

from test_ddg import FIG_FLOW

COURIER_JS = """\
Page({
  data: { phone: "" },
  onPhoneInput: function (e) {
    this.setData({ phone: e.detail.value });
  },
  submitForm: function () {
    var phone = this.data.phone;
    wx.setStorageSync("phone", phone);
    wx.request({ url: "https://api.courier.example/order", data: phone });
  }
});
"""

COURIER_WXML = """\
<view>
  <view>Number Protection</view>
  <input placeholder="Please input phone number" bindinput="onPhoneInput"/>
  <button bindtap="submitForm">Submit</button>
</view>
"""


def build(source, file_id="pages/p/p.js"):
    chain = build_scope_chain(parse_js(source), file_id)
    return chain, build_ddg(chain)


class TestTables:
    def test_printed_source_examples_all_present(self, source_table):
        printed = [
            "wx.getSystemInfo", "wx.getSystemInfoSync", "env",
            "wx.getStorage", "wx.getStorageSync", "wx.getStorageInfo",
            "wx.getStorageInfoSync",
            "wx.getNetworkType", "wx.request", "wx.downloadFile",
            "wx.onSocketMessage",
            "wx.getImageInfo", "wx.chooseImage", "wx.getVideoInfo",
            "wx.openVideoEditor",
            "wx.chooseLocation", "wx.getLocation", "wx.onLocationChange",
            "wx.getSavedFileList", "wx.getFileInfo", "wx.getSavedFileInfo",
            "wx.getShareInfo", "wx.authPrivateMessage",
            "wx.getBeacons", "wx.onBeaconSeviceChange",
            "wx.onBLEPeripheralConnectionStateChanged",
            "wx.login", "wx.getAccountInfoSync", "wx.addCard",
            "wx.getEnterOptionsSync", "wx.getLaunchOptionSync",
        ]
        for name in printed:
            assert name in source_table, name

    def test_printed_sink_examples_all_present(self, sink_table):
        for name in ("wx.setStorage", "wx.saveFile", "wx.showToast",
                     "wx.saveImageToPhotosAlbum", "console.log"):
            assert sink_table[name].category == "Usage", name
        for name in ("wx.request", "wx.uploadFile", "wx.requestPayment",
                     "wx.connectSocket", "wx.sendSocketMessage"):
            assert sink_table[name].category == "Transmission", name

    def test_request_is_both_source_and_sink(self, source_table, sink_table):
        assert source_table["wx.request"].data_type == "request return"
        assert sink_table["wx.request"].category == "Transmission"

    def test_category_targets_recorded(self):
        from mcds.taint import (default_sinks_path, default_sources_path,
                                table_targets)
        sources = table_targets(default_sources_path())
        assert sources["Device"] == 76
        assert sum(sources.values()) == 150
        sinks = table_targets(default_sinks_path())
        assert sinks == {"Usage": 120, "Transmission": 31}

    def test_duplicate_source_rejected(self, tmp_path):
        table = tmp_path / "s.tsv"
        table.write_text("wx.login\tOpen Interface\taccount\t1\n"
                         "wx.login\tOpen Interface\taccount\t1\n")
        with pytest.raises(TableError):
            load_source_table(table)

    def test_unknown_data_type_rejected(self, tmp_path, type_lexicon):
        table = tmp_path / "s.tsv"
        table.write_text("wx.x\tSystem\tnot a real type\t1\n")
        with pytest.raises(TableError):
            load_source_table(table, type_lexicon)

    def test_bad_sink_category_rejected(self, tmp_path):
        table = tmp_path / "k.tsv"
        table.write_text("wx.x\telsewhere\n")
        with pytest.raises(TableError):
            load_sink_table(table)


class TestUiSources:
    def test_button_text_and_handler(self, type_lexicon):
        chain, _ = build(FIG_FLOW)
        layout = parse_layout(
            '<button bindtap="searchLocation">Select location</button>')
        ui, diags = resolve_ui_sources(layout, chain, type_lexicon, "p")
        assert diags == []
        assert len(ui) == 1
        assert ui[0].data_type == "location"
        assert ui[0].provenance == "own"
        assert ui[0].handler_entity is not None

    def test_placeholder_match(self, type_lexicon):
        chain, _ = build(COURIER_JS)
        layout = parse_layout(COURIER_WXML)
        ui, _ = resolve_ui_sources(layout, chain, type_lexicon, "p")
        input_source = next(u for u in ui if u.component_tag == "input")
        assert input_source.data_type == "phone number"
        assert input_source.provenance == "placeholder"

    def test_ancestor_climb(self, type_lexicon):
        chain, _ = build("Page({ pick: function (e) {} });")
        layout = parse_layout(
            '<view><view>upload ID card photo</view>'
            '<view><icon bindtap="pick"/></view></view>')
        ui, _ = resolve_ui_sources(layout, chain, type_lexicon, "p")
        assert ui[0].data_type == "ID card"
        assert ui[0].provenance.startswith("ancestor:")

    def test_unbound_handler_reported_component_kept(self, type_lexicon):
        chain, _ = build("var x = 1;")
        layout = parse_layout('<button bindtap="ghost">Select location</button>')
        ui, diags = resolve_ui_sources(layout, chain, type_lexicon, "p")
        assert len(ui) == 1
        assert ui[0].data_type == "location"  # matched from text alone
        assert any(d["code"] == "unbound-handler" for d in diags)

    def test_handler_name_tokenized(self, type_lexicon):
        chain, _ = build("Page({ getPhoneNumber: function (e) {} });")
        layout = parse_layout('<button bindtap="getPhoneNumber"></button>')
        ui, _ = resolve_ui_sources(layout, chain, type_lexicon, "p")
        assert ui[0].data_type == "phone number"


class TestFlows:
    def test_figure_flow(self, source_table, sink_table, type_lexicon):
        chain, graph = build(FIG_FLOW, "pages/share/share.js")
        flows = find_flows(graph, source_table, [], sink_table)
        sinked = [f for f in flows if f.sink is not None]
        assert len(sinked) == 1
        flow = sinked[0]
        assert flow.source.api_name == "wx.chooseLocation"
        assert flow.sink.api_name == "wx.request"
        assert flow.data_type == "location"
        practices = flows_to_practices(flows)
        assert {p.as_pair() for p in practices} == {
            ("location", COLLECT), ("location", SEND)}

    def test_courier_three_operations(self, source_table, sink_table,
                                      type_lexicon):
        chain, graph = build(COURIER_JS, "pages/register/register.js")
        ui, _ = resolve_ui_sources(parse_layout(COURIER_WXML), chain,
                                   type_lexicon, "pages/register/register")
        flows = find_flows(graph, source_table, ui, sink_table)
        practices = flows_to_practices(flows)
        assert {p.as_pair() for p in practices} == {
            ("phone number", COLLECT),
            ("phone number", USE),
            ("phone number", SEND)}

    def test_no_sources_no_flows(self, source_table, sink_table):
        _, graph = build("var a = 1; var b = a + 1;")
        assert find_flows(graph, source_table, [], sink_table) == []

    def test_source_only_flow_still_collects(self, source_table, sink_table):
        _, graph = build(
            "wx.getLocation({ success: function (res) { var keep = res; } });")
        flows = find_flows(graph, source_table, [], sink_table)
        assert len(flows) == 1
        assert flows[0].sink is None
        practices = flows_to_practices(flows)
        assert {p.as_pair() for p in practices} == {("location", COLLECT)}

    def test_album_source_only_rule(self):
        flow = TaintFlow(
            SourceSpec("wx.chooseImage", "Media", "album", True),
            [0], None, "album", "f.js:1")
        assert {p.as_pair() for p in flows_to_practices([flow])} == {
            ("album", COLLECT)}

    def test_diamond_two_sinks_exhaustive_oracle(self):
        # one source endpoint fans out to two sink argument endpoints
        from oracle_utils import synthetic_graph
        graph, ids = synthetic_graph(
            4, [(0, 1), (0, 2), (1, 3), (2, 3)])
        from mcds.ddg import ApiCall
        graph.api_calls.append(ApiCall("wx.getLocation", 0, Span(1, 0, 1, 0),
                                       ids[0], ids[0]))
        graph.api_calls.append(ApiCall("wx.setStorage", 1, Span(2, 0, 2, 0),
                                       ids[1], ids[1]))
        graph.api_calls.append(ApiCall("wx.request", 2, Span(3, 0, 3, 0),
                                       ids[2], ids[2]))
        sources = {"wx.getLocation": SourceSpec("wx.getLocation", "Location",
                                                "location", True)}
        sinks = {"wx.setStorage": SinkSpec("wx.setStorage", "Usage"),
                 "wx.request": SinkSpec("wx.request", "Transmission")}
        flows = find_flows(graph, sources, [], sinks)
        with_sinks = [f for f in flows if f.sink is not None]
        assert len(with_sinks) == 2

        # brute-force path enumeration must find paths to the same sinks
        def all_paths(adjacency, start, goal, seen):
            if start == goal:
                return [[goal]]
            paths = []
            for nxt in adjacency.get(start, ()):
                if nxt in seen:
                    continue
                for rest in all_paths(adjacency, nxt, goal, seen | {nxt}):
                    paths.append([start] + rest)
            return paths

        for flow in with_sinks:
            goal = flow.path[-1]
            assert all_paths(graph.adjacency, ids[0], goal, {ids[0]})
            # every consecutive pair on the recovered path is a real edge
            for a, b in zip(flow.path, flow.path[1:]):
                assert b in graph.adjacency.get(a, ())

    def test_collect_dominance(self, source_table, sink_table, type_lexicon):
        for source, wxml in ((FIG_FLOW, None), (COURIER_JS, COURIER_WXML)):
            chain, graph = build(source)
            ui = []
            if wxml:
                ui, _ = resolve_ui_sources(parse_layout(wxml), chain,
                                           type_lexicon, "p")
            practices = flows_to_practices(
                find_flows(graph, source_table, ui, sink_table))
            types_with_use_or_send = {p.data_type for p in practices
                                      if p.operation in (USE, SEND)}
            for data_type in types_with_use_or_send:
                assert DataPractice(data_type, COLLECT) in practices

    def test_sink_monotonicity(self, source_table, sink_table):
        _, graph = build(FIG_FLOW)
        base = find_flows(graph, source_table, [], sink_table)
        richer = dict(sink_table)
        richer["wx.neverCalled"] = SinkSpec("wx.neverCalled", "Usage")
        more = find_flows(graph, source_table, [], richer)
        base_keys = {(f.source_name, f.sink.api_name if f.sink else None)
                     for f in base}
        more_keys = {(f.source_name, f.sink.api_name if f.sink else None)
                     for f in more}
        assert base_keys <= more_keys

    def test_path_validity_structural(self, source_table, sink_table):
        _, graph = build(FIG_FLOW)
        for flow in find_flows(graph, source_table, [], sink_table):
            for a, b in zip(flow.path, flow.path[1:]):
                assert b in graph.adjacency.get(a, ())
