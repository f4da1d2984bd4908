import pathlib
from contextlib import nullcontext

import pytest
from hypothesis import given, settings
from strategies import gnf_grammars

from langkit.cfl.document import Document, GrammarDocument, MuDocument, TermsDocument
from langkit.cfl.equivalence import Equivalent, word_equiv
from langkit.cfl.grammar import NonBooleanSemiring, NotGNF, grammar_to_coalgebra
from langkit.cfl.powerset_ext import WeakGNFSystem
from langkit.cfl.semiring import BOOLEAN, NATURAL
from langkit.cfl.syntax import ParseError

DATA = pathlib.Path(__file__).parent / "data"


def read(name: str) -> str:
    return (DATA / name).read_text(encoding="utf-8")


def words(series):
    return ["".join(w) for w, _ in series]


def test_known_types():
    assert Document.known_types() == ["grammar", "terms", "mu"]


@pytest.mark.parametrize(
    "name, kind, expected",
    [
        pytest.param("anbn", GrammarDocument, ["", "ab", "aabb"], id="anbn"),
        pytest.param("anbn-mu", MuDocument, ["", "ab", "aabb"], id="anbn-mu"),
        pytest.param("anbmam+n", GrammarDocument, ["", "aa", "ba", "aaaa", "abaa", "bbaa"], id="running"),
        pytest.param(
            "running-terms", TermsDocument, ["", "aa", "ba", "aaaa", "abaa", "bbaa"], id="running-terms"
        ),
    ],
)
def test_from_resource(name, kind, expected):
    doc = Document.from_resource(name)
    assert isinstance(doc, kind)
    assert doc.semiring == BOOLEAN
    assert words(doc.series(4)) == expected


def test_catalan_resource():
    doc = Document.from_resource("catalan")
    assert doc.semiring == NATURAL
    assert doc.series(5) == [(("a",) * n, c) for n, c in enumerate([1, 1, 2, 5, 14, 42])]


def test_semiring_override():
    doc = Document.from_resource("catalan", semiring=BOOLEAN)
    assert doc.semiring == BOOLEAN
    assert doc.coefficient("aa")
    terms = Document.from_text(read("running-terms.cfl"), semiring=NATURAL)
    assert terms.coefficient("abaa") == 1
    with pytest.raises(NonBooleanSemiring):
        Document.from_text(read("running.cfl"), semiring=NATURAL)


@pytest.mark.parametrize(
    "doc_dict, expectation",
    [
        pytest.param(
            {"type": "grammar", "alphabet": "a b", "productions": {"x": ["_", "a x y"], "y": ["b"]}},
            nullcontext(["", "ab", "aabb"]),
            id="alphabet-string",
        ),
        pytest.param(
            {"type": "grammar", "alphabet": ["a"], "productions": {"x": "a"}},
            nullcontext(["a"]),
            id="single-body",
        ),
        pytest.param(
            {"type": "mu", "alphabet": ["a"], "expression": "mu x . (1 + (a * x))"},
            nullcontext(["", "a", "aa", "aaa", "aaaa"]),
            id="mu",
        ),
        pytest.param(
            {"type": "regex", "alphabet": ["a"]},
            pytest.raises(ValueError, match="Unknown type 'regex'"),
            id="unknown-type",
        ),
        pytest.param(
            {"type": "grammar", "productions": {"x": ["a"]}},
            pytest.raises(ValueError, match="must provide `alphabet`"),
            id="no-alphabet",
        ),
        pytest.param(
            {"type": "mu", "alphabet": ["a"]},
            pytest.raises(ValueError, match="must provide `expression`"),
            id="no-expression",
        ),
        pytest.param(
            {"type": "terms", "alphabet": ["a"], "derivatives": {"x": "x"}},
            pytest.raises(ValueError, match="must be a mapping from letters"),
            id="bad-derivatives",
        ),
    ],
)
def test_from_dict(doc_dict, expectation):
    with expectation as expected:
        doc = Document.from_dict(doc_dict)
        assert words(doc.series(4)) == expected


def test_from_resource_not_found():
    with pytest.raises(FileNotFoundError):
        Document.from_resource("no-such-system")


def test_load(tmp_path):
    assert isinstance(Document.load("anbn"), GrammarDocument)
    doc = Document.load(str(DATA / "running-terms.cfl"))
    assert isinstance(doc, TermsDocument)
    assert doc.coefficient("abaa")
    assert not doc.coefficient("baba")

    preset = tmp_path / "mine.yaml"
    preset.write_text("type: mu\nalphabet: [a]\nexpression: 'mu x . (a * 1)'\n")
    doc = Document.load(str(preset))
    assert isinstance(doc, MuDocument)
    assert words(doc.series(3)) == ["a"]


@pytest.mark.parametrize("path", sorted(DATA.glob("*.cfl")), ids=lambda p: p.stem)
def test_document_roundtrip(path):
    text = path.read_text(encoding="utf-8")
    assert Document.from_text(text).format() == text


def test_running_grammar_to_terms():
    doc = Document.from_text(read("running.cfl")).translate("terms")
    assert isinstance(doc, TermsDocument)
    assert doc.format() == "\n".join(
        [
            "#terms",
            "semiring: bool",
            "alphabet: a b",
            "start: x",
            "x.out = 1",
            "x.a = x * z",
            "x.b = y * z",
            "y.out = 1",
            "y.b = y * z",
            "z.a = 1",
            "",
        ]
    )


@pytest.mark.parametrize(
    "source, kind, target",
    [
        pytest.param("running-terms.cfl", "mu", "running-mu.cfl", id="terms-to-mu"),
        pytest.param("running-mu.cfl", "terms", "running-terms.cfl", id="mu-to-terms"),
        pytest.param("running-terms.cfl", "grammar", "hat.cfl", id="terms-to-grammar"),
        pytest.param("running.cfl", "grammar", "running.cfl", id="identity"),
    ],
)
def test_translate_text(source, kind, target):
    assert Document.from_text(read(source)).translate(kind).format() == read(target)


def test_catalan_to_mu():
    doc = Document.from_text(read("catalan.cfl")).translate("mu")
    assert doc.format() == "#mu\nsemiring: nat\nalphabet: a\nmu x . (1 + (a * (x * x)))\n"
    assert [c for _, c in doc.series(4)] == [1, 1, 2, 5, 14]


@pytest.mark.parametrize("kind", ["grammar", "terms", "mu"])
def test_translations_agree(kind):
    doc = Document.from_text(read("running.cfl"))
    other = doc.translate(kind)
    assert other.kind == kind
    assert isinstance(word_equiv(doc.state(), other.state(), 8), Equivalent)


def test_translate_unknown():
    doc = Document.from_resource("anbn")
    with pytest.raises(ValueError, match="Unknown type 'regex'"):
        doc.translate("regex")


def test_weighted_terms():
    doc = Document.from_text(read("weighted-terms.cfl"))
    assert doc.semiring == NATURAL
    assert doc.coefficient("") == 6
    assert doc.coefficient("a") == 18
    assert doc.coefficient("b") == 0
    assert doc.coefficient("ab") == 2
    grammar = doc.translate("grammar")
    assert isinstance(word_equiv(doc.state(), grammar.state(), 8), Equivalent)


def test_derivative_text():
    doc = Document.from_text(read("running.cfl"))
    assert doc.derivative_text("") == "x"
    assert doc.derivative_text("b") == "y z"
    assert doc.derivative_text("bb") == "y z z"
    assert doc.derivative_text("ba") == "_"
    assert doc.derivative_text("aa") == "_ + x z z"
    terms = doc.translate("terms")
    assert terms.derivative_text("b") == "y * z"


def test_weak_document():
    doc = Document.from_text(read("weak.cfl"))
    assert isinstance(doc, GrammarDocument)
    assert doc.system is None
    with pytest.raises(NotGNF):
        doc.state()
    with pytest.raises(NotGNF):
        doc.translate("terms")
    assert isinstance(doc.weak_system(), WeakGNFSystem)


def test_with_start():
    doc = Document.from_resource("anbmam+n").with_start("y")
    assert doc.start_text() == "y"
    assert words(doc.series(4)) == ["", "ba", "bbaa"]
    mu = Document.from_resource("anbn-mu").with_start("a*")
    assert words(mu.series(2)) == ["", "a", "aa"]


def test_mu_document_start_key():
    with pytest.raises(ParseError, match="no start element") as excinfo:
        Document.from_text("#mu\nalphabet: a\nstart: x\nmu x . 1\n")
    assert excinfo.value.line == 3


@settings(deadline=None, max_examples=100)
@given(gnf_grammars())
def test_translations_agree_on_random_grammars(g):
    doc = GrammarDocument(grammar_to_coalgebra(g), grammar=g)
    for kind in ("terms", "mu"):
        assert isinstance(word_equiv(doc.state(), doc.translate(kind).state(), 8), Equivalent)


def test_weighted_grammar_lines():
    text = "\n".join(
        [
            "#grammar",
            "semiring: nat",
            "alphabet: a b",
            "start: 2*x",
            "x.out = 2",
            "x.a = 1*y + 2*x x",
            "y.out = 1",
            "y.b = 3*_ + x",
            "",
        ]
    )
    doc = Document.from_text(text)
    assert doc.semiring == NATURAL
    assert doc.coefficient("") == 4
    assert doc.coefficient("a") == 18
    assert doc.coefficient("ab") == 2 * (3 + 2)
    assert doc.format() == read("weighted-grammar.cfl")
