import json

import pytest

from mcds.errors import MalformedMarkup, MissingEntry
from mcds.ingest import load_package, parse_layout


class TestLoadPackage:
    def test_minimal_well_formed_package(self, tmp_path):
        (tmp_path / "app.json").write_text(
            '{"pages": ["pages/index/index"]}')
        pages = tmp_path / "pages" / "index"
        pages.mkdir(parents=True)
        (pages / "index.js").write_text("var a = 1;")
        (pages / "index.wxml").write_text("<view>hi</view>")
        package = load_package(tmp_path)
        assert [p.page_id for p in package.pages] == ["pages/index/index"]
        assert package.pages[0].logic_source == "var a = 1;"
        assert package.policy_text is None

    def test_policy_matched_by_filename_keyword(self, tmp_path):
        (tmp_path / "app.json").write_text('{"pages": []}')
        (tmp_path / "privacy_policy.txt").write_text("We collect nothing.")
        package = load_package(tmp_path)
        assert package.policy_text == "We collect nothing."
        assert package.policy_files == ["privacy_policy.txt"]

    def test_policy_matched_by_content_keyword(self, tmp_path):
        (tmp_path / "app.json").write_text('{"pages": []}')
        (tmp_path / "terms.txt").write_text(
            "This privacy policy explains our data use.")
        package = load_package(tmp_path)
        assert package.policy_text is not None

    def test_empty_directory_missing_entry(self, tmp_path):
        with pytest.raises(MissingEntry):
            load_package(tmp_path)

    def test_missing_directory(self, tmp_path):
        with pytest.raises(MissingEntry):
            load_package(tmp_path / "nope")

    def test_unlisted_page_found_by_scan(self, tmp_path):
        (tmp_path / "app.json").write_text('{"pages": []}')
        orphan = tmp_path / "pages" / "extra"
        orphan.mkdir(parents=True)
        (orphan / "extra.js").write_text("var x = 1;")
        package = load_package(tmp_path)
        assert [p.page_id for p in package.pages] == ["pages/extra/extra"]

    def test_unresolvable_config_entry_is_warned_not_dropped(self, tmp_path):
        (tmp_path / "app.json").write_text('{"pages": ["pages/gone/gone"]}')
        package = load_package(tmp_path)
        assert package.pages == []
        assert any("pages/gone/gone" in w for w in package.warnings)

    def test_declaration_order_preserved(self, tmp_path):
        (tmp_path / "app.json").write_text(
            '{"pages": ["pages/z/z", "pages/a/a"]}')
        for name in ("z", "a"):
            d = tmp_path / "pages" / name
            d.mkdir(parents=True)
            (d / f"{name}.js").write_text("var a = 1;")
        package = load_package(tmp_path)
        assert [p.page_id for p in package.pages] == [
            "pages/z/z", "pages/a/a"]

    def test_multiple_policies_concatenated_in_path_order(self, tmp_path):
        (tmp_path / "app.json").write_text('{"pages": []}')
        (tmp_path / "a_privacy.txt").write_text("First.")
        (tmp_path / "z_privacy.txt").write_text("Second.")
        package = load_package(tmp_path)
        assert package.policy_text == "First.\n\nSecond."
        assert any("concatenated" in w for w in package.warnings)

    def test_reload_is_deterministic(self, tmp_path):
        (tmp_path / "app.json").write_text('{"pages": ["pages/i/i"]}')
        d = tmp_path / "pages" / "i"
        d.mkdir(parents=True)
        (d / "i.js").write_text("var a = 1;")
        (tmp_path / "privacy.txt").write_text("policy text")
        first = json.dumps(load_package(tmp_path).to_dict(), sort_keys=True)
        second = json.dumps(load_package(tmp_path).to_dict(), sort_keys=True)
        assert first == second


class TestParseLayout:
    def test_button_binding_and_text(self):
        tree = parse_layout(
            '<button bindtap="searchLocation">Select location</button>')
        node = tree.root.children[0]
        assert node.tag == "button"
        assert node.bindings == {"tap": "searchLocation"}
        assert node.text == "Select location"

    def test_placeholder_attribute_retained(self):
        tree = parse_layout('<input placeholder="Please input phone number"/>')
        assert tree.root.children[0].attrs["placeholder"] == \
            "Please input phone number"

    def test_empty_string_empty_tree(self):
        assert parse_layout("").is_empty()

    def test_unknown_tags_are_fine(self):
        tree = parse_layout("<swiper><swiper-item>x</swiper-item></swiper>")
        assert tree.root.children[0].tag == "swiper"

    def test_stray_close_tag_ignored(self):
        tree = parse_layout("<view>a</button></view>")
        assert tree.root.children[0].text == "a"

    def test_unclosed_tags_autoclose(self):
        tree = parse_layout("<view><text>a")
        view = tree.root.children[0]
        assert view.children[0].text == "a"

    def test_malformed_beyond_recovery(self):
        with pytest.raises(MalformedMarkup) as err:
            parse_layout('<view title="never closed>')
        assert err.value.line == 1
        assert err.value.column >= 0

    def test_comments_skipped(self):
        tree = parse_layout("<!-- note --><view>x</view>")
        assert len(tree.root.children) == 1

    def test_attribute_round_trip(self):
        source = ('<view class="a b" data-x="{{item.id}}" bind:tap="go">'
                  '<input value="{{v}}" placeholder="hi"/>'
                  '<button catchtap="h" disabled>ok</button></view>')
        tree = parse_layout(source)
        pairs = sorted((n.tag, k, v) for n in tree.walk()
                       for k, v in n.attrs.items())
        reparsed = parse_layout(tree.to_markup())
        pairs2 = sorted((n.tag, k, v) for n in reparsed.walk()
                        for k, v in n.attrs.items())
        assert pairs == pairs2

    def test_bind_colon_form(self):
        tree = parse_layout('<view bind:tap="go"/>')
        # view is not void, but self-closing syntax still closes it
        assert tree.root.children[0].bindings == {"tap": "go"}

    def test_subtree_text_own_text_first(self):
        tree = parse_layout("<view>a<text>b</text>c<text>d</text></view>")
        assert tree.root.children[0].subtree_text() == "a c b d"
