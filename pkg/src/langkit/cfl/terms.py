"""Syntactic systems of behavioural differential equations

Terms are built from constants, letters, variables, sums and products, and are
purely syntactic: no flattening or simplification happens implicitly. A
:class:`TermSystem` gives each variable an output and one derivative term per
letter; the structure extends to all terms through the product rule.
"""

import functools
from dataclasses import dataclass
from typing import (
    Callable,
    Dict,
    Hashable,
    Iterable,
    List,
    Mapping,
    Optional,
    Sequence,
    Set,
    Tuple,
)

from .grammar import Alphabet, GrammarSystem, LetterName
from .polynomial import Polynomial, series_derivative, series_output
from .semiring import BOOLEAN, Semiring, Value, embed_indicator


class UnboundVariable(ValueError):
    def __init__(self, name: str):
        super().__init__(f"Unbound variable {name!r}")
        self.name = name


class Term:
    """Base class of term nodes"""

    __slots__ = ()

    binder: Optional[str] = None

    def children(self) -> Tuple["Term", ...]:
        return ()

    def __str__(self) -> str:
        from .syntax import format_term

        return format_term(self)


def cached_hash(cls):
    """Memoize the structural hash of a frozen dataclass node"""
    structural = cls.__hash__

    def __hash__(self) -> int:
        value = self.__dict__.get("_hash")
        if value is None:
            value = self.__dict__["_hash"] = structural(self)
        return value

    cls.__hash__ = __hash__
    return cls


@cached_hash
@dataclass(frozen=True, repr=False)
class Const(Term):
    value: Value

    def __repr__(self) -> str:
        return f"Const({self.value!r})"


@cached_hash
@dataclass(frozen=True, repr=False)
class Letter(Term):
    name: LetterName

    def __repr__(self) -> str:
        return f"Letter({self.name!r})"


@cached_hash
@dataclass(frozen=True, repr=False)
class Var(Term):
    name: str

    def __repr__(self) -> str:
        return f"Var({self.name!r})"


@cached_hash
@dataclass(frozen=True, repr=False)
class Sum(Term):
    left: Term
    right: Term

    def children(self) -> Tuple[Term, ...]:
        return (self.left, self.right)

    def __repr__(self) -> str:
        return f"Sum({self.left!r}, {self.right!r})"


@cached_hash
@dataclass(frozen=True, repr=False)
class Prod(Term):
    left: Term
    right: Term

    def children(self) -> Tuple[Term, ...]:
        return (self.left, self.right)

    def __repr__(self) -> str:
        return f"Prod({self.left!r}, {self.right!r})"


def sum_of(terms: Sequence[Term], semiring: Semiring = BOOLEAN) -> Term:
    """Right-nested sum, the zero constant when ``terms`` is empty"""
    if not terms:
        return Const(semiring.zero)
    result = terms[-1]
    for term in reversed(terms[:-1]):
        result = Sum(term, result)
    return result


def product_of(terms: Sequence[Term], semiring: Semiring = BOOLEAN) -> Term:
    """Right-nested product, the unit constant when ``terms`` is empty"""
    if not terms:
        return Const(semiring.one)
    result = terms[-1]
    for term in reversed(terms[:-1]):
        result = Prod(term, result)
    return result


def variables(t: Term) -> Set[str]:
    """Variables occurring in ``t`` (bound ones included for μ-expressions)"""
    found: Set[str] = set()
    stack = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            found.add(node.name)
        elif node.binder is not None:
            found.add(node.binder)
        stack.extend(node.children())
    return found


def letters(t: Term) -> Set[LetterName]:
    found: Set[LetterName] = set()
    stack = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, Letter):
            found.add(node.name)
        stack.extend(node.children())
    return found


def is_right_linear(t: Term) -> bool:
    """Whether ``t`` is generated by ``t ::= k | x | t + t | a × t``

    >>> is_right_linear(Prod(Letter("a"), Var("x")))
    True
    >>> is_right_linear(Prod(Var("x"), Letter("a")))
    False
    """
    if isinstance(t, (Const, Var)):
        return True
    if isinstance(t, Sum):
        return is_right_linear(t.left) and is_right_linear(t.right)
    if isinstance(t, Prod):
        return isinstance(t.left, Letter) and is_right_linear(t.right)
    return False


class TermSystem:
    """System of behavioural differential equations over terms

    Parameters
    ----------
    alphabet: Alphabet
        Input letters
    nonterminals: sequence of str
        Variables ``X``, in printing order
    output: mapping
        ``o(x)``, missing entries are zero
    deriv: mapping
        ``x_a`` as a term for each ``(x, a)``, missing entries are ``0̄``
    semiring: Semiring
        Coefficient semiring
    """

    def __init__(
        self,
        alphabet: Alphabet,
        nonterminals: Sequence[str],
        output: Mapping[str, Value],
        deriv: Mapping[Tuple[str, LetterName], Term],
        semiring: Semiring = BOOLEAN,
    ):
        self.alphabet = alphabet
        self.semiring = semiring
        self.nonterminals: Tuple[str, ...] = tuple(nonterminals)
        known = set(self.nonterminals)
        if len(known) != len(self.nonterminals):
            raise ValueError("Duplicate variables")
        for x in self.nonterminals:
            if x in alphabet:
                raise ValueError(f"{x!r} is both a letter and a variable")
        for x in output:
            if x not in known:
                raise UnboundVariable(x)
        self.output: Dict[str, Value] = {
            x: semiring.coerce(output.get(x, semiring.zero)) for x in self.nonterminals
        }
        for x, a in deriv:
            if x not in known:
                raise UnboundVariable(x)
            alphabet.check(a)
        self.deriv: Dict[Tuple[str, LetterName], Term] = {}
        for x in self.nonterminals:
            for a in alphabet:
                term = deriv.get((x, a), Const(semiring.zero))
                self.check_term(term)
                self.deriv[x, a] = term

    def check_term(self, t: Term):
        """Raise if ``t`` mentions unknown variables or letters"""
        for x in variables(t):
            if x not in self.output:
                raise UnboundVariable(x)
        for a in letters(t):
            self.alphabet.check(a)

    def is_regular(self) -> bool:
        """Whether every derivative is right-linear, making all languages regular"""
        return all(is_right_linear(t) for t in self.deriv.values())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TermSystem):
            return NotImplemented
        return (
            self.alphabet == other.alphabet
            and self.semiring == other.semiring
            and self.nonterminals == other.nonterminals
            and self.output == other.output
            and self.deriv == other.deriv
        )

    def __repr__(self) -> str:
        return (
            f"TermSystem(alphabet={list(self.alphabet)!r}, "
            f"nonterminals={list(self.nonterminals)!r}, semiring={self.semiring.name!r})"
        )


def term_output(s: TermSystem, t: Term) -> Value:
    K = s.semiring
    if isinstance(t, Const):
        return K.coerce(t.value)
    if isinstance(t, Letter):
        s.alphabet.check(t.name)
        return K.zero
    if isinstance(t, Var):
        if t.name not in s.output:
            raise UnboundVariable(t.name)
        return s.output[t.name]
    if isinstance(t, Sum):
        return K.add(term_output(s, t.left), term_output(s, t.right))
    if isinstance(t, Prod):
        return K.mul(term_output(s, t.left), term_output(s, t.right))
    raise TypeError(f"Not a term: {t!r}")


def term_derivative(s: TermSystem, t: Term, a: LetterName) -> Term:
    """Derivative of ``t`` by ``a``, exactly as given by the derivative rules

    ``(σ × υ)_a = (σ_a × υ) + (j(ō(σ)) × υ_a)``, where ``j`` turns a
    coefficient into a constant term. No simplification is applied.
    """
    s.alphabet.check(a)
    K = s.semiring
    if isinstance(t, Const):
        return Const(K.zero)
    if isinstance(t, Letter):
        s.alphabet.check(t.name)
        return Const(embed_indicator(t.name == a, K))
    if isinstance(t, Var):
        if t.name not in s.output:
            raise UnboundVariable(t.name)
        return s.deriv[t.name, a]
    if isinstance(t, Sum):
        return Sum(term_derivative(s, t.left, a), term_derivative(s, t.right, a))
    if isinstance(t, Prod):
        return Sum(
            Prod(term_derivative(s, t.left, a), t.right),
            Prod(Const(term_output(s, t.left)), term_derivative(s, t.right, a)),
        )
    raise TypeError(f"Not a term: {t!r}")


def simplify(t: Term, semiring: Semiring = BOOLEAN) -> Term:
    """Remove zero summands and absorb units and zeros of products

    Only behaviour-preserving rewrites are applied, bottom-up. μ-binders are
    left untouched.
    """
    if isinstance(t, Sum):
        left = simplify(t.left, semiring)
        right = simplify(t.right, semiring)
        if isinstance(left, Const) and isinstance(right, Const):
            return Const(semiring.add(left.value, right.value))
        if _is_const(left, semiring.zero, semiring):
            return right
        if _is_const(right, semiring.zero, semiring):
            return left
        return Sum(left, right)
    if isinstance(t, Prod):
        left = simplify(t.left, semiring)
        if _is_const(left, semiring.zero, semiring):
            return left
        right = simplify(t.right, semiring)
        if isinstance(left, Const) and isinstance(right, Const):
            return Const(semiring.mul(left.value, right.value))
        if _is_const(right, semiring.zero, semiring):
            return right
        if _is_const(left, semiring.one, semiring):
            return right
        if _is_const(right, semiring.one, semiring):
            return left
        return Prod(left, right)
    return t


def _is_const(t: Term, value: Value, semiring: Semiring) -> bool:
    return isinstance(t, Const) and semiring.eq(t.value, value)


def term_word_derivative(
    s: TermSystem, t: Term, w: Iterable[LetterName], simplified: bool = True
) -> Term:
    for a in w:
        t = term_derivative(s, t, a)
        if simplified:
            t = simplify(t, s.semiring)
    return t


def term_coefficient(s: TermSystem, t: Term, w: Iterable[LetterName]) -> Value:
    """Coefficient of ``w`` in the series of ``t``

    Intermediate derivatives are kept in normal form, which does not change any
    coefficient.
    """
    s.check_term(t)
    p = normal_form(t, s.semiring)
    for a in w:
        p = term_normal_derivative(s, p, a)
    return term_normal_output(s, p)


def term_series(s: TermSystem, t: Term, maxlen: int) -> List[Tuple[Tuple[LetterName, ...], Value]]:
    """Words of length at most ``maxlen`` with nonzero coefficient, with coefficients"""
    if maxlen < 0:
        raise ValueError("`maxlen` must be nonnegative")
    s.check_term(t)
    K = s.semiring
    result = []
    level = [((), normal_form(t, K))]
    for length in range(maxlen + 1):
        for word, p in level:
            value = term_normal_output(s, p)
            if not K.is_zero(value):
                result.append((word, value))
        if length == maxlen:
            break
        level = [
            (word + (a,), term_normal_derivative(s, p, a))
            for word, p in level
            if p
            for a in s.alphabet
        ]
    return result


@dataclass(frozen=True)
class HatVar:
    """Extended nonterminal standing for a variable"""

    name: str

    def __str__(self) -> str:
        return f"{self.name}^"


@dataclass(frozen=True)
class HatLetter:
    """Extended nonterminal standing for a letter"""

    name: LetterName

    def __str__(self) -> str:
        return f"{self.name}^"


ExtendedNonterminal = Hashable


def translate_f(t: Term, semiring: Semiring = BOOLEAN) -> Polynomial:
    """Translate a term into a polynomial over extended nonterminals

    Variables and letters become the one-symbol words ``x^`` and ``a^``, sums
    become sums and products become concatenation.

    >>> sorted(str(w[0]) for w in translate_f(Sum(Var("x"), Letter("a"))).words())
    ['a^', 'x^']
    """
    if isinstance(t, Const):
        return Polynomial.constant(semiring.coerce(t.value), semiring)
    if isinstance(t, Var):
        return Polynomial.monomial((HatVar(t.name),), semiring=semiring)
    if isinstance(t, Letter):
        return Polynomial.monomial((HatLetter(t.name),), semiring=semiring)
    if isinstance(t, Sum):
        return translate_f(t.left, semiring) + translate_f(t.right, semiring)
    if isinstance(t, Prod):
        return translate_f(t.left, semiring) * translate_f(t.right, semiring)
    raise TypeError(f"Not a term: {t!r}")


def extended_nonterminals(s: TermSystem) -> List[ExtendedNonterminal]:
    return [HatVar(x) for x in s.nonterminals] + [HatLetter(a) for a in s.alphabet]


def induced_grammar_system(s: TermSystem) -> GrammarSystem:
    """Grammar system over extended nonterminals making :func:`translate_f` a homomorphism

    ``o(x^) = o(x)``, ``x^_a = f(x_a)``, ``o(b^) = 0`` and ``b^_a`` is ``{ε}``
    when ``b = a``, empty otherwise.
    """
    K = s.semiring
    output: Dict[ExtendedNonterminal, Value] = {}
    deriv: Dict[Tuple[ExtendedNonterminal, LetterName], Polynomial] = {}
    for x in s.nonterminals:
        output[HatVar(x)] = s.output[x]
        for a in s.alphabet:
            deriv[HatVar(x), a] = translate_f(s.deriv[x, a], K)
    for b in s.alphabet:
        output[HatLetter(b)] = K.zero
        for a in s.alphabet:
            deriv[HatLetter(b), a] = (
                Polynomial.unit(K) if a == b else Polynomial.zero(K)
            )
    return GrammarSystem(s.alphabet, extended_nonterminals(s), output, deriv, K)


def _extended_key(sym: ExtendedNonterminal) -> Tuple[int, str]:
    if isinstance(sym, HatVar):
        return (0, sym.name)
    if isinstance(sym, HatLetter):
        return (1, sym.name)
    return (2, str(sym))


def _extended_atom(sym: ExtendedNonterminal) -> Term:
    if isinstance(sym, HatVar):
        return Var(sym.name)
    if isinstance(sym, HatLetter):
        return Letter(sym.name)
    raise ValueError(f"Not an extended nonterminal: {sym!r}")


def polynomial_to_term(
    p: Polynomial,
    atom: Callable[[Hashable], Term] = Var,
    key: Optional[Callable[[Hashable], object]] = None,
) -> Term:
    """Turn a polynomial into a term, the right inverse of a translation

    Monomials are taken in length-lexicographic order with the empty word last,
    summed right-nested; each monomial is a right-nested product of its symbols,
    preceded by its coefficient unless that coefficient is 1.
    """
    K = p.semiring
    ordered = p.sorted_items(key=key) if key is not None else p.sorted_items(key=str)
    ordered = [item for item in ordered if item[0]] + [
        item for item in ordered if not item[0]
    ]
    summands: List[Term] = []
    for word, coeff in ordered:
        factors: List[Term] = [atom(sym) for sym in word]
        if not K.eq(coeff, K.one) or not factors:
            factors.insert(0, Const(coeff))
        summands.append(product_of(factors, K))
    return sum_of(summands, K)


def translate_g(p: Polynomial) -> Term:
    """Section of :func:`translate_f`: ``translate_f(translate_g(p)) == p``

    >>> p = Polynomial.from_words([(HatVar("x"), HatLetter("a")), ()])
    >>> translate_g(p)
    Sum(Prod(Var('x'), Letter('a')), Const(True))
    """
    return polynomial_to_term(p, _extended_atom, _extended_key)



# Normal forms are polynomials whose symbols are atoms: letters, variables and
# μ-binders. Constants inside products become coefficients, which commute with
# every series.

NORMAL_FORM_CACHE = 8192


@functools.lru_cache(maxsize=NORMAL_FORM_CACHE)
def normal_form(t: Term, semiring: Semiring = BOOLEAN) -> Polynomial:
    """Polynomial over atoms with the same series as ``t``

    Terms equal up to units, zeros, associativity, commutativity of ``+`` and
    distributivity (and idempotence of ``+`` over an idempotent semiring) get
    the same normal form.

    >>> len(normal_form(Prod(Sum(Letter("a"), Const(True)), Var("x"))))
    2
    """
    if isinstance(t, Const):
        return Polynomial.constant(semiring.coerce(t.value), semiring)
    if isinstance(t, Sum):
        return normal_form(t.left, semiring) + normal_form(t.right, semiring)
    if isinstance(t, Prod):
        left = normal_form(t.left, semiring)
        if left.is_zero():
            return left
        return left * normal_form(t.right, semiring)
    return Polynomial.monomial((t,), semiring=semiring)


def from_normal_form(p: Polynomial) -> Term:
    """Term of a normal form, monomials ordered by their printed atoms"""
    return polynomial_to_term(p, lambda atom: atom, str)


def normalize(t: Term, semiring: Semiring = BOOLEAN) -> Term:
    return from_normal_form(normal_form(t, semiring))


def term_normal_output(s: TermSystem, p: Polynomial) -> Value:
    """Output of a normal form over the atoms of ``s``"""
    return series_output(p, lambda atom: term_output(s, atom))


def term_normal_derivative(s: TermSystem, p: Polynomial, a: LetterName) -> Polynomial:
    """Derivative of a normal form, again in normal form

    Variables are replaced by the normal forms of their derivatives, so no term
    is ever rebuilt.
    """
    s.alphabet.check(a)
    K = s.semiring
    return series_derivative(
        p,
        a,
        lambda atom: term_output(s, atom),
        lambda atom, b: normal_form(term_derivative(s, atom, b), K),
    )
