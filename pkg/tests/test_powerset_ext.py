import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from strategies import ALPHABET, gnf_grammars
from test_equivalence import RUNNING_PRODUCTIONS, weighted_state

from langkit.cfl.grammar import (
    Alphabet,
    AlphabetMismatch,
    CFGrammar,
    NonBooleanSemiring,
    NotGNF,
    grammar_to_coalgebra,
)
from langkit.cfl.powerset_ext import (
    AGREEMENT,
    EMPTY,
    EPSILON,
    LAW_NAMES,
    BehaviourPair,
    LawViolation,
    LetterSymbol,
    NonterminalSymbol,
    UnknownSymbol,
    WeakGNFSystem,
    check_semiring_agreement,
    concat,
    fold_language,
    format_language,
    oplus,
    otimes,
    random_pair,
    reexpand,
    weak_gnf_extension,
)

a, b = LetterSymbol("a"), LetterSymbol("b")
x, y = NonterminalSymbol("x"), NonterminalSymbol("y")


def weak_system() -> WeakGNFSystem:
    # x -> _ | a a x | b y, y -> b
    g = CFGrammar(
        ALPHABET,
        {"x": [(), ("a", "a", "x"), ("b", "y")], "y": [("b",)]},
        weak=True,
    )
    return WeakGNFSystem.from_grammar(g)


def test_behaviour_pair():
    p = BehaviourPair(ALPHABET, True, {"a": [(x,)]})
    assert p.out is True
    assert p.der("a") == frozenset({(x,)})
    assert p.der("b") == EMPTY
    assert p == BehaviourPair(ALPHABET, 1, {"a": {(x,)}, "b": []})
    assert repr(p) == "BehaviourPair(1, {a: {x}, b: {}})"
    assert BehaviourPair.zero(ALPHABET) != BehaviourPair.one(ALPHABET)


def test_concat_and_format():
    assert concat([(x,), ()], [(a,)]) == frozenset({(x, a), (a,)})
    assert concat([(x,)], EMPTY) == EMPTY
    assert format_language({(x, a), ()}) == "{_, x a}"


def test_oplus():
    p = BehaviourPair(ALPHABET, False, {"a": [(x,)]})
    q = BehaviourPair(ALPHABET, True, {"a": [(y,)], "b": [()]})
    assert oplus(p, q) == BehaviourPair(ALPHABET, True, {"a": [(x,), (y,)], "b": [()]})


def test_reexpand():
    q = BehaviourPair(ALPHABET, True, {"b": [(), (x,)]})
    assert reexpand(q) == frozenset({(), (b,), (b, x)})
    assert reexpand(BehaviourPair.zero(ALPHABET)) == EMPTY
    assert reexpand(BehaviourPair.one(ALPHABET)) == EPSILON


def test_otimes():
    p = BehaviourPair(ALPHABET, False, {"a": [(x,)]})
    q = BehaviourPair(ALPHABET, True, {"b": [()]})
    assert otimes(p, q) == BehaviourPair(ALPHABET, False, {"a": [(x,), (x, b)]})
    # with o(p) = 1 the derivatives of q are added
    r = BehaviourPair(ALPHABET, True, {"a": [(x,)]})
    assert otimes(r, q) == BehaviourPair(ALPHABET, True, {"a": [(x,), (x, b)], "b": [()]})


def test_alphabet_mismatch():
    with pytest.raises(AlphabetMismatch):
        oplus(BehaviourPair.one(ALPHABET), BehaviourPair.one(Alphabet(["a"])))


def test_from_grammar():
    s = weak_system()
    assert s.nonterminals == ("x", "y")
    assert s.output == {"x": True, "y": False}
    assert s.deriv["x", "a"] == frozenset({(a, x)})
    assert s.deriv["x", "b"] == frozenset({(y,)})
    assert s.deriv["y", "b"] == EPSILON
    with pytest.raises(NotGNF):
        WeakGNFSystem.from_grammar(CFGrammar(ALPHABET, {"x": [("x", "a")]}, weak=True))


def test_lift():
    s = WeakGNFSystem.lift(grammar_to_coalgebra(CFGrammar(ALPHABET, RUNNING_PRODUCTIONS)))
    assert s.nonterminals == ("x", "y", "z")
    assert s.deriv["x", "a"] == frozenset({(x, NonterminalSymbol("z"))})
    with pytest.raises(NonBooleanSemiring):
        WeakGNFSystem.lift(weighted_state(1, "x x").system)


def test_unknown_symbol():
    s = weak_system()
    with pytest.raises(UnknownSymbol, match="Unknown symbol w"):
        s.image(NonterminalSymbol("w"))
    with pytest.raises(UnknownSymbol):
        weak_gnf_extension(s).output([(LetterSymbol("c"),)])


def test_image():
    s = weak_system()
    assert s.image(b) == BehaviourPair(ALPHABET, False, {"b": [()]})
    assert s.image(x) == BehaviourPair(ALPHABET, True, {"a": [(a, x)], "b": [(y,)]})


def test_extension():
    automaton = weak_gnf_extension(weak_system())
    assert automaton.output([()]) is True
    assert automaton.output([(a,)]) is False
    assert automaton.output([(x, x)]) is True
    assert automaton.output([]) is False
    # after reading a from "a x", what remains is x itself
    assert automaton.derivative([(a, x)], "a") == frozenset({(), (a, a, x), (b, y)})
    assert automaton.derivative([(a, x)], "b") == EMPTY
    assert automaton.derivative([(y, x)], "b") == frozenset({(), (a, a, x), (b, y)})


def test_fold_language():
    s = weak_system()
    assert fold_language(s, []) == BehaviourPair.zero(ALPHABET)
    assert fold_language(s, [()]) == BehaviourPair.one(ALPHABET)
    assert fold_language(s, [(x,)]) == s.image(x)
    language = [(a, x), (y, b, x), ()]
    assert fold_language(s, language) == weak_gnf_extension(s).behaviour(language)


@pytest.mark.parametrize("seed", [0, 1, 42])
def test_check_semiring_agreement(seed: int):
    report = check_semiring_agreement(weak_system(), samples=100, seed=seed)
    assert report.ok
    assert list(report.checks) == list(LAW_NAMES) + [AGREEMENT]
    assert all(count == 100 for count in report.checks.values())
    assert report.lines()[0] == "oplus-left-unit: 100 checks, ok"


def test_report_is_reproducible():
    first = check_semiring_agreement(weak_system(), samples=10, seed=7)
    second = check_semiring_agreement(weak_system(), samples=10, seed=7)
    assert first == second


def test_law_violation():
    p = BehaviourPair(ALPHABET, False)
    violation = LawViolation("idempotence", (p, frozenset({(x,)})), p, p)
    assert str(violation) == "idempotence: BehaviourPair(0, {a: {}, b: {}}); {x}"
    assert len(LAW_NAMES) == 13


@settings(max_examples=25, deadline=None)
@given(gnf_grammars(), st.integers(0, 2**16))
def test_semiring_laws_random_grammars(g: CFGrammar, seed: int):
    s = WeakGNFSystem.lift(grammar_to_coalgebra(g))
    report = check_semiring_agreement(s, samples=20, seed=seed)
    assert report.ok, report.lines()


def test_random_pair():
    rng = random.Random(3)
    p = random_pair(rng, ALPHABET, weak_system().symbols())
    assert p.alphabet == ALPHABET
    assert all(len(w) <= 3 for c in "ab" for w in p.der(c))
