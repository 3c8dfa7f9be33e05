import pytest

from mcds.ddg import build_ddg
from mcds.jsparser import parse_js
from mcds.lexicon import default_dict_dir, load_lexicons
from mcds.scopes import build_scope_chain
from mcds.taint import load_sink_table, load_source_table

from pathlib import Path

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def lexicons():
    return load_lexicons(default_dict_dir())


@pytest.fixture(scope="session")
def type_lexicon(lexicons):
    return lexicons[0]


@pytest.fixture(scope="session")
def operation_lexicon(lexicons):
    return lexicons[1]


@pytest.fixture(scope="session")
def source_table(type_lexicon):
    return load_source_table(type_lexicon=type_lexicon)


@pytest.fixture(scope="session")
def sink_table():
    return load_sink_table()


@pytest.fixture
def pipeline():
    """source text -> (ast, chain, ddg)"""

    def run(source: str, file_id: str = "test.js"):
        ast = parse_js(source)
        chain = build_scope_chain(ast, file_id)
        return ast, chain, build_ddg(chain)

    return run


@pytest.fixture
def apps_dir():
    return FIXTURES / "apps"


@pytest.fixture
def estree_dir():
    return FIXTURES / "estree"
