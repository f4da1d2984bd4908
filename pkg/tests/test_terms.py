import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from strategies import ALPHABET, in_running_language, in_running_tail

from langkit.cfl.grammar import coefficient, poly_derivative, poly_output
from langkit.cfl.polynomial import Polynomial
from langkit.cfl.semiring import BOOLEAN, NATURAL
from langkit.cfl.terms import (
    Const,
    HatLetter,
    HatVar,
    Letter,
    Prod,
    Sum,
    TermSystem,
    UnboundVariable,
    Var,
    induced_grammar_system,
    is_right_linear,
    normalize,
    polynomial_to_term,
    simplify,
    term_coefficient,
    term_derivative,
    term_output,
    term_series,
    term_word_derivative,
    translate_f,
    translate_g,
)

x, y = Var("x"), Var("y")
a, b = Letter("a"), Letter("b")


def running_system() -> TermSystem:
    return TermSystem(
        ALPHABET,
        ["x", "y"],
        {"x": 1, "y": 1},
        {("x", "a"): Prod(x, a), ("x", "b"): Prod(y, a), ("y", "b"): Prod(y, a)},
    )


def test_system_defaults():
    s = running_system()
    assert s.output == {"x": True, "y": True}
    assert s.deriv["y", "a"] == Const(False)
    assert not s.is_regular()


@pytest.mark.parametrize(
    "nonterminals, deriv, error, match",
    [
        pytest.param(["x", "x"], {}, ValueError, "Duplicate variables", id="duplicate"),
        pytest.param(["a"], {}, ValueError, "both a letter and a variable", id="letter"),
        pytest.param(["x"], {("x", "a"): Var("z")}, UnboundVariable, "'z'", id="unbound"),
        pytest.param(["x"], {("z", "a"): x}, UnboundVariable, "'z'", id="unbound-head"),
    ],
)
def test_system_validation(nonterminals: list, deriv: dict, error: type, match: str):
    with pytest.raises(error, match=match):
        TermSystem(ALPHABET, nonterminals, {}, deriv)


def test_term_output():
    s = running_system()
    assert term_output(s, Sum(Const(False), x)) is True
    assert term_output(s, Prod(x, a)) is False
    assert term_output(s, Prod(x, y)) is True
    with pytest.raises(UnboundVariable):
        term_output(s, Var("w"))


def test_term_derivative():
    s = running_system()
    # (x × a)_a = (x_a × a) + (o(x) × a_a)
    assert term_derivative(s, Prod(x, a), "a") == Sum(
        Prod(Prod(x, a), a), Prod(Const(True), Const(True))
    )
    assert term_derivative(s, b, "a") == Const(False)
    assert term_derivative(s, Const(True), "b") == Const(False)
    assert str(term_word_derivative(s, x, "ab")) == "(y * a) * a"


@pytest.mark.parametrize(
    "term, semiring, expected",
    [
        pytest.param(Sum(Const(False), x), BOOLEAN, x, id="zero-summand"),
        pytest.param(Prod(Const(True), x), BOOLEAN, x, id="unit-factor"),
        pytest.param(Prod(Const(False), Var("w")), BOOLEAN, Const(False), id="zero-factor"),
        pytest.param(Prod(x, Const(0)), NATURAL, Const(0), id="zero-right"),
        pytest.param(Sum(Const(2), Const(3)), NATURAL, Const(5), id="constants"),
        pytest.param(Sum(x, x), BOOLEAN, Sum(x, x), id="no-idempotence"),
    ],
)
def test_simplify(term, semiring, expected):
    assert simplify(term, semiring) == expected


@pytest.mark.parametrize(
    "term, semiring, expected",
    [
        pytest.param(Sum(x, x), BOOLEAN, x, id="idempotent"),
        pytest.param(Sum(x, x), NATURAL, Prod(Const(2), x), id="not-idempotent"),
        pytest.param(Sum(x, a), BOOLEAN, Sum(a, x), id="commutative"),
        pytest.param(
            Prod(Sum(a, b), x), BOOLEAN, Sum(Prod(a, x), Prod(b, x)), id="distributive"
        ),
        pytest.param(Prod(Const(True), x), BOOLEAN, x, id="unit"),
        pytest.param(Prod(Const(False), x), BOOLEAN, Const(False), id="zero"),
        pytest.param(Const(3), NATURAL, Const(3), id="constant"),
    ],
)
def test_normalize(term, semiring, expected):
    assert normalize(term, semiring) == expected


def test_right_linear():
    assert is_right_linear(Sum(Const(True), Prod(a, Prod(b, x))))
    assert not is_right_linear(Prod(x, y))
    s = TermSystem(ALPHABET, ["x"], {"x": 1}, {("x", "a"): x, ("x", "b"): Prod(a, x)})
    assert s.is_regular()


def test_running_coefficients():
    s = running_system()
    for w in ALPHABET.words(10):
        assert term_coefficient(s, x, w) is in_running_language(w), w
        assert term_coefficient(s, y, w) is in_running_tail(w), w


def test_term_series():
    s = running_system()
    assert [w for w, _ in term_series(s, y, 4)] == [(), ("b", "a"), ("b", "b", "a", "a")]
    with pytest.raises(ValueError, match="nonnegative"):
        term_series(s, y, -1)


def test_translate_f():
    assert translate_f(Prod(x, a)) == Polynomial.monomial((HatVar("x"), HatLetter("a")))
    assert translate_f(Sum(Const(2), x), NATURAL) == Polynomial(
        NATURAL, {(): 2, (HatVar("x"),): 1}
    )
    assert str(HatVar("x")) == "x^"


def test_translate_g_section():
    for t in [Prod(x, Sum(a, Const(True))), Sum(Prod(b, y), Prod(y, Prod(a, x)))]:
        p = translate_f(t)
        assert translate_f(translate_g(p)) == p


def test_induced_grammar_system():
    s = running_system()
    g = induced_grammar_system(s)
    assert g.nonterminals == (HatVar("x"), HatVar("y"), HatLetter("a"), HatLetter("b"))
    assert g.output[HatLetter("a")] is False
    assert g.deriv[HatLetter("a"), "a"] == Polynomial.unit()
    assert g.deriv[HatLetter("a"), "b"].is_zero()
    for t in [x, y, Prod(y, x), Sum(a, Prod(x, b))]:
        p = translate_f(t)
        for w in ALPHABET.words(5):
            assert coefficient(g, p, w) == term_coefficient(s, t, w), (t, w)


def test_polynomial_to_term():
    p = Polynomial.from_words([(), ("x",)])
    assert polynomial_to_term(p) == Sum(x, Const(True))
    q = Polynomial(NATURAL, {("x", "y"): 2, (): 1})
    assert polynomial_to_term(q) == Sum(Prod(Const(2), Prod(x, y)), Const(1))
    assert polynomial_to_term(Polynomial.zero(NATURAL)) == Const(0)


def weighted_system() -> TermSystem:
    return TermSystem(
        ALPHABET,
        ["x", "y"],
        {"x": 2, "y": 0},
        {("x", "a"): Sum(x, Const(3)), ("y", "b"): Prod(x, y)},
        NATURAL,
    )


def random_terms(constants: list) -> st.SearchStrategy:
    return st.recursive(
        st.sampled_from([Const(c) for c in constants] + [a, b, x, y]),
        lambda children: st.one_of(
            st.builds(Sum, children, children), st.builds(Prod, children, children)
        ),
        max_leaves=12,
    )


@pytest.mark.parametrize(
    "system, constants",
    [
        pytest.param(running_system(), [False, True], id="bool"),
        pytest.param(weighted_system(), [0, 1, 3], id="nat"),
    ],
)
@settings(max_examples=1000, deadline=None)
@given(data=st.data())
def test_translate_f_homomorphism(system, constants, data):
    t = data.draw(random_terms(constants))
    g = induced_grammar_system(system)
    p = translate_f(t, system.semiring)
    assert poly_output(g, p) == term_output(system, t)
    for letter in ALPHABET:
        assert translate_f(term_derivative(system, t, letter), system.semiring) == poly_derivative(g, p, letter)


extended_words = st.lists(
    st.lists(st.sampled_from([HatVar("x"), HatVar("y"), HatLetter("a"), HatLetter("b")]), max_size=4).map(tuple),
    max_size=5,
)


@settings(max_examples=1000, deadline=None)
@given(extended_words)
def test_translate_g_section_random(words):
    p = Polynomial.from_words(words)
    assert translate_f(translate_g(p)) == p
