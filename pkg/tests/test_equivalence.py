import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from strategies import ALPHABET, gnf_grammars
from test_muexpr import ANBN
from test_terms import running_system

from langkit.cfl.document import GrammarDocument
from langkit.cfl.equivalence import (
    Equivalent,
    GrammarState,
    Inequivalent,
    MuState,
    TermState,
    Unknown,
    bisim_upto,
    check_compatible,
    check_relation,
    word_equiv,
)
from langkit.cfl.grammar import (
    Alphabet,
    AlphabetMismatch,
    CFGrammar,
    GrammarSystem,
    grammar_to_coalgebra,
)
from langkit.cfl.muexpr import NotClosed, star
from langkit.cfl.polynomial import Polynomial
from langkit.cfl.semiring import BOOLEAN, NATURAL, SemiringMismatch
from langkit.cfl.terms import Const, Letter, Prod, Sum, TermSystem, Var


def grammar_state(productions: dict, start: str) -> GrammarState:
    s = grammar_to_coalgebra(CFGrammar(ALPHABET, productions))
    return GrammarState(s, s.poly((start,)))


def weighted_state(out: int, deriv: str, coeff: int = 1) -> GrammarState:
    s = GrammarSystem(
        Alphabet(["a"]),
        ["x"],
        {"x": out},
        {("x", "a"): Polynomial.monomial(tuple(deriv.split()), coeff, NATURAL)},
        NATURAL,
    )
    return GrammarState(s, s.poly(("x",)))


ANBN_PRODUCTIONS = {"x": [(), ("a", "x", "y")], "y": [("b",)]}
RUNNING_PRODUCTIONS = {
    "x": [(), ("a", "x", "z"), ("b", "y", "z")],
    "y": [(), ("b", "y", "z")],
    "z": [("a",)],
}


def test_state_series():
    s = grammar_state({"x": [("a", "y")], "y": [("b",)]}, "x")
    assert list(s.iter_series()) == [(("a", "b"), True)]
    catalan = weighted_state(1, "x x")
    assert [v for _, v in itertools.islice(catalan.iter_series(), 6)] == [1, 1, 2, 5, 14, 42]
    assert catalan.coefficient("aaa") == 5
    with pytest.raises(ValueError, match="nonnegative"):
        catalan.series(-1)


def test_word_equiv_equivalent():
    left = grammar_state(ANBN_PRODUCTIONS, "x")
    right = MuState(ANBN, ALPHABET, BOOLEAN)
    result = word_equiv(left, right, 6)
    assert result == Equivalent(checked_to=6)
    assert result.exit_code == 0
    assert str(result) == "equivalent (checked up to length 6)"


def test_word_equiv_representations():
    grammar = grammar_state(RUNNING_PRODUCTIONS, "x")
    terms = TermState(running_system(), Var("x"))
    assert isinstance(word_equiv(grammar, terms, 6), Equivalent)


@pytest.mark.parametrize("check", [word_equiv, bisim_upto], ids=["word", "bisim"])
def test_shortest_witness(check):
    left = grammar_state(ANBN_PRODUCTIONS, "x")
    right = grammar_state(RUNNING_PRODUCTIONS, "x")
    result = check(left, right, 8)
    assert result == Inequivalent(("a", "a"))
    assert result.exit_code == 1
    assert str(result) == "inequivalent: witness aa"


def test_weighted_witness():
    catalan = weighted_state(1, "x x")
    assert isinstance(word_equiv(catalan, weighted_state(1, "x x"), 6), Equivalent)
    # 2^n differs from the Catalan numbers from n = 1
    assert word_equiv(catalan, weighted_state(1, "x", 2), 6) == Inequivalent(("a",))


def test_bisim_regular():
    both = grammar_state({"x": [(), ("a", "x"), ("b", "x")]}, "x")
    parity = grammar_state(
        {"y": [(), ("a", "y"), ("b", "z")], "z": [(), ("a", "z"), ("b", "y")]}, "y"
    )
    result = bisim_upto(both, parity)
    assert isinstance(result, Equivalent)
    assert result.exit_code == 0
    assert len(result.relation) == 2
    assert check_relation(result.relation)


def test_bisim_terms_and_mu():
    terms = TermSystem(ALPHABET, ["x"], {"x": 1}, {("x", "a"): Var("x"), ("x", "b"): Var("x")})
    everything = star(Sum(Letter("a"), Letter("b")), ALPHABET)
    result = bisim_upto(TermState(terms, Var("x")), MuState(everything, ALPHABET, BOOLEAN))
    assert isinstance(result, Equivalent)
    assert len(result.relation) == 1


def test_bisim_budget():
    left = grammar_state(ANBN_PRODUCTIONS, "x")
    right = grammar_state({"u": [(), ("a", "u", "v")], "v": [("b",)]}, "u")
    result = bisim_upto(left, right, 5)
    assert isinstance(result, Unknown)
    assert result.explored == 5
    assert result.exit_code == 2
    assert str(result) == "unknown: budget exhausted after 5 pairs"


def test_check_relation_rejects():
    left = grammar_state(ANBN_PRODUCTIONS, "x")
    right = grammar_state(RUNNING_PRODUCTIONS, "x")
    assert not check_relation({(left, right)})


def test_incompatible_states():
    with pytest.raises(AlphabetMismatch):
        check_compatible(weighted_state(1, "x x"), grammar_state(ANBN_PRODUCTIONS, "x"))
    catalan = weighted_state(1, "x x")
    boolean = GrammarSystem(Alphabet(["a"]), ["x"], {"x": True}, {})
    with pytest.raises(SemiringMismatch):
        word_equiv(catalan, GrammarState(boolean, boolean.poly(("x",))), 3)
    with pytest.raises(ValueError, match="nonnegative"):
        word_equiv(catalan, catalan, -1)


def test_mu_state_validation():
    with pytest.raises(NotClosed):
        MuState(Var("x"), ALPHABET, BOOLEAN)


def first_state(g: CFGrammar) -> GrammarState:
    s = grammar_to_coalgebra(g)
    return GrammarState(s, s.poly((g.nonterminals[0],)))


def first_difference(p, q, maxlen: int):
    for w in ALPHABET.words(maxlen):
        if p.coefficient(w) != q.coefficient(w):
            return w
    return None


@settings(max_examples=200, deadline=None)
@given(gnf_grammars(), gnf_grammars())
def test_shortest_witness_exhaustive(g1: CFGrammar, g2: CFGrammar):
    p, q = first_state(g1), first_state(g2)
    expected = first_difference(p, q, 6)
    result = word_equiv(p, q, 6)
    if expected is None:
        assert result == Equivalent(checked_to=6)
    else:
        assert result == Inequivalent(expected)


@settings(max_examples=200, deadline=None)
@given(gnf_grammars(), gnf_grammars(), st.booleans())
def test_bisim_agrees_with_word_equiv(g1: CFGrammar, g2: CFGrammar, translated: bool):
    p = first_state(g1)
    if translated:
        doc = GrammarDocument(grammar_to_coalgebra(g1), grammar=g1).translate("terms")
        q = doc.state()
    else:
        q = first_state(g2)
    bisim = bisim_upto(p, q, 200)
    words = word_equiv(p, q, 8)
    if isinstance(bisim, Equivalent):
        assert isinstance(words, Equivalent)
        assert check_relation(bisim.relation)
    elif isinstance(bisim, Inequivalent):
        assert p.coefficient(bisim.witness) != q.coefficient(bisim.witness)
        if len(bisim.witness) <= 8:
            assert isinstance(words, Inequivalent)
            assert len(words.witness) <= len(bisim.witness)
    if isinstance(words, Inequivalent):
        assert not isinstance(bisim, Equivalent)
    if translated:
        assert isinstance(words, Equivalent)
        assert not isinstance(bisim, Inequivalent)


ZERO = Const(False)
A_STAR = star(Letter("a"), ALPHABET)


@pytest.mark.parametrize(
    "lhs, rhs",
    [
        pytest.param(Sum(ZERO, ANBN), ANBN, id="zero-sum"),
        pytest.param(Sum(ANBN, A_STAR), Sum(A_STAR, ANBN), id="commutative"),
        pytest.param(Sum(ANBN, ANBN), ANBN, id="idempotent"),
        pytest.param(
            Prod(ANBN, Sum(A_STAR, Letter("b"))),
            Sum(Prod(ANBN, A_STAR), Prod(ANBN, Letter("b"))),
            id="left-distributive",
        ),
        pytest.param(
            Prod(Sum(ANBN, A_STAR), Letter("b")),
            Sum(Prod(ANBN, Letter("b")), Prod(A_STAR, Letter("b"))),
            id="right-distributive",
        ),
        pytest.param(Prod(ZERO, ANBN), ZERO, id="zero-product"),
    ],
)
def test_bisim_expression_laws(lhs, rhs):
    result = bisim_upto(MuState(lhs, ALPHABET, BOOLEAN), MuState(rhs, ALPHABET, BOOLEAN))
    assert isinstance(result, Equivalent)
    assert check_relation(result.relation)
