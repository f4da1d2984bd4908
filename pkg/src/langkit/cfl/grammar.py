"""Grammar coalgebras

A grammar in Greibach normal form is read as a coalgebra on its nonterminals:
``o(x)`` tells whether ``x → ε`` and ``x_a`` collects the tails ``w`` of the
productions ``x → a w``. The structure extends to (weighted) polynomials over
nonterminals, which gives word derivatives, membership and series.
"""

import enum
import logging
from collections import deque
from typing import (
    Dict,
    FrozenSet,
    Hashable,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
)

from .polynomial import Polynomial, series_derivative, series_output
from .semiring import BOOLEAN, Semiring, Value

logger = logging.getLogger(__name__)

LetterName = str
Word = Tuple[LetterName, ...]
Nonterminal = Hashable


class NotGNF(ValueError):
    def __init__(self, head: Nonterminal, body: Tuple[Hashable, ...]):
        shown = " ".join(str(sym) for sym in body) or "_"
        super().__init__(f"Production {head} -> {shown} is not in Greibach normal form")
        self.head = head
        self.body = body


class UnknownNonterminal(ValueError):
    def __init__(self, name: Nonterminal):
        super().__init__(f"Unknown nonterminal {name!r}")
        self.name = name


class UnknownLetter(ValueError):
    def __init__(self, name: LetterName):
        super().__init__(f"Unknown letter {name!r}")
        self.name = name


class NonBooleanSemiring(ValueError):
    def __init__(self, semiring: Semiring):
        super().__init__(
            f"Operation requires the Boolean semiring, got {semiring.name!r}"
        )
        self.semiring = semiring


class AlphabetMismatch(ValueError):
    def __init__(self, first: "Alphabet", second: "Alphabet"):
        super().__init__(f"Alphabet mismatch: {first} vs {second}")
        self.first = first
        self.second = second


class Alphabet:
    """Ordered, nonempty alphabet of distinct letters

    The listed order is the total order used for sums over letters and for
    enumerating words.

    >>> A = Alphabet(["a", "b"])
    >>> list(A.words(2))
    [(), ('a',), ('b',), ('a', 'a'), ('a', 'b'), ('b', 'a'), ('b', 'b')]
    """

    def __init__(self, symbols: Iterable[LetterName]):
        self.symbols: Tuple[LetterName, ...] = tuple(symbols)
        if not self.symbols:
            raise ValueError("Alphabet cannot be empty")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError(f"Duplicate letters in alphabet {list(self.symbols)!r}")
        for sym in self.symbols:
            if not isinstance(sym, str) or not sym.isidentifier():
                raise ValueError(f"Invalid letter {sym!r}")
        self._index = {sym: i for i, sym in enumerate(self.symbols)}

    def __iter__(self) -> Iterator[LetterName]:
        return iter(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def __contains__(self, letter: object) -> bool:
        return letter in self._index

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Alphabet) and self.symbols == other.symbols

    def __hash__(self) -> int:
        return hash(self.symbols)

    def __repr__(self) -> str:
        return f"Alphabet({list(self.symbols)!r})"

    def __str__(self) -> str:
        return " ".join(self.symbols)

    def index(self, letter: LetterName) -> int:
        self.check(letter)
        return self._index[letter]

    def check(self, letter: LetterName):
        if letter not in self._index:
            raise UnknownLetter(letter)

    def check_word(self, word: Iterable[LetterName]) -> Word:
        word = tuple(word)
        for letter in word:
            self.check(letter)
        return word

    def words(self, maxlen: int) -> Iterator[Word]:
        """All words of length at most ``maxlen``, in length-then-alphabet order"""
        level: List[Word] = [()]
        for _ in range(maxlen + 1):
            yield from level
            level = [word + (letter,) for word in level for letter in self.symbols]

    def same_letters(self, other: "Alphabet") -> bool:
        return set(self.symbols) == set(other.symbols)


class GrammarSystem:
    """Grammar coalgebra ``(o, δ)`` over a semiring

    Parameters
    ----------
    alphabet: Alphabet
        Input letters
    nonterminals: sequence of nonterminals
        The state space ``X``, in the order used for printing
    output: mapping
        ``o(x)`` for each nonterminal, missing entries are zero
    deriv: mapping
        ``x_a`` for each pair ``(x, a)``, missing entries are the zero polynomial
    semiring: Semiring
        Coefficient semiring (Boolean by default)
    """

    def __init__(
        self,
        alphabet: Alphabet,
        nonterminals: Sequence[Nonterminal],
        output: Mapping[Nonterminal, Value],
        deriv: Mapping[Tuple[Nonterminal, LetterName], Polynomial],
        semiring: Semiring = BOOLEAN,
    ):
        self.alphabet = alphabet
        self.semiring = semiring
        self.nonterminals: Tuple[Nonterminal, ...] = tuple(nonterminals)
        if len(set(self.nonterminals)) != len(self.nonterminals):
            raise ValueError("Duplicate nonterminals")
        self._index = {x: i for i, x in enumerate(self.nonterminals)}
        for x in self.nonterminals:
            if x in alphabet:
                raise ValueError(f"{x!r} is both a letter and a nonterminal")

        for x in output:
            self.check_nonterminal(x)
        self.output: Dict[Nonterminal, Value] = {
            x: semiring.coerce(output.get(x, semiring.zero)) for x in self.nonterminals
        }

        for x, a in deriv:
            self.check_nonterminal(x)
            alphabet.check(a)
        self.deriv: Dict[Tuple[Nonterminal, LetterName], Polynomial] = {}
        for x in self.nonterminals:
            for a in alphabet:
                poly = deriv.get((x, a), Polynomial.zero(semiring))
                if poly.semiring != semiring:
                    raise ValueError(f"Derivative of {x!r} by {a!r} has wrong semiring")
                self.check_polynomial(poly)
                self.deriv[x, a] = poly

    def check_nonterminal(self, x: Nonterminal):
        if x not in self._index:
            raise UnknownNonterminal(x)

    def check_polynomial(self, poly: Polynomial):
        for sym in poly.symbols():
            self.check_nonterminal(sym)

    def sort_key(self, x: Nonterminal) -> int:
        return self._index[x]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GrammarSystem):
            return NotImplemented
        return (
            self.alphabet == other.alphabet
            and self.semiring == other.semiring
            and self.nonterminals == other.nonterminals
            and all(self.semiring.eq(self.output[x], other.output[x]) for x in self.nonterminals)
            and self.deriv == other.deriv
        )

    def __repr__(self) -> str:
        return (
            f"GrammarSystem(alphabet={list(self.alphabet)!r}, "
            f"nonterminals={list(self.nonterminals)!r}, semiring={self.semiring.name!r})"
        )

    def poly(self, *words: Iterable[Nonterminal]) -> Polynomial:
        """Build the polynomial summing ``words`` in this system's semiring"""
        poly = Polynomial.from_words(words, self.semiring)
        self.check_polynomial(poly)
        return poly


class CFGrammar:
    """Context-free grammar given by its productions

    ``productions`` maps each nonterminal to a set of bodies. A body is a tuple
    of symbols, the empty tuple standing for ε. In Greibach normal form every
    other body is a letter followed by nonterminals; with ``weak=True`` the tail
    may also contain letters.
    """

    def __init__(
        self,
        alphabet: Alphabet,
        productions: Mapping[Nonterminal, Iterable[Iterable[Hashable]]],
        nonterminals: Optional[Sequence[Nonterminal]] = None,
        weak: bool = False,
    ):
        self.alphabet = alphabet
        self.weak = weak
        if nonterminals is None:
            nonterminals = list(productions)
        self.nonterminals: Tuple[Nonterminal, ...] = tuple(nonterminals)
        known = set(self.nonterminals)
        for x in productions:
            if x not in known:
                raise UnknownNonterminal(x)
        self.productions: Dict[Nonterminal, FrozenSet[Tuple[Hashable, ...]]] = {
            x: frozenset(tuple(body) for body in productions.get(x, ()))
            for x in self.nonterminals
        }
        for x, bodies in self.productions.items():
            for body in bodies:
                for sym in body:
                    if sym not in known and sym not in alphabet:
                        raise ValueError(f"Unknown symbol {sym!r} in production of {x!r}")

    def is_gnf_body(self, body: Tuple[Hashable, ...]) -> bool:
        if not body:
            return True
        if body[0] not in self.alphabet:
            return False
        if self.weak:
            return True
        return all(sym in self.productions for sym in body[1:])

    def check_gnf(self):
        for x, bodies in self.productions.items():
            for body in bodies:
                if not self.is_gnf_body(body):
                    raise NotGNF(x, body)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CFGrammar):
            return NotImplemented
        return (
            self.alphabet == other.alphabet
            and self.nonterminals == other.nonterminals
            and self.productions == other.productions
        )

    def __repr__(self) -> str:
        return f"CFGrammar({self.productions!r})"


def grammar_to_coalgebra(g: CFGrammar) -> GrammarSystem:
    """Read a GNF grammar as a Boolean grammar coalgebra

    ``o(x)`` is 1 iff ``x → ε``, and ``x_a`` is the set of tails ``w`` with
    ``x → a w``.

    Raises :class:`NotGNF` if a body has the wrong shape
    """
    if g.weak:
        raise ValueError("Weak GNF grammars have no grammar coalgebra, use WeakGNFSystem")
    g.check_gnf()
    output = {x: () in bodies for x, bodies in g.productions.items()}
    deriv: Dict[Tuple[Nonterminal, LetterName], Polynomial] = {}
    for a in g.alphabet:
        for x, bodies in g.productions.items():
            deriv[x, a] = Polynomial.from_words(
                body[1:] for body in bodies if body and body[0] == a
            )
    return GrammarSystem(g.alphabet, g.nonterminals, output, deriv, BOOLEAN)


def coalgebra_to_grammar(s: GrammarSystem) -> CFGrammar:
    """Inverse of :func:`grammar_to_coalgebra`: ``p(x) = i(o(x)) ∪ ⋃_a {a} x_a``

    Raises :class:`NonBooleanSemiring` for weighted systems
    """
    if s.semiring != BOOLEAN:
        raise NonBooleanSemiring(s.semiring)
    productions: Dict[Nonterminal, List[Tuple[Hashable, ...]]] = {}
    for x in s.nonterminals:
        bodies: List[Tuple[Hashable, ...]] = [()] if s.output[x] else []
        for a in s.alphabet:
            bodies.extend((a,) + word for word in s.deriv[x, a].words())
        productions[x] = bodies
    return CFGrammar(s.alphabet, productions, s.nonterminals)


def poly_output(s: GrammarSystem, p: Polynomial) -> Value:
    """Output of a polynomial: ``Σ k_w · ô(w)`` with ``ô(x w) = o(x) · ô(w)``

    Raises :class:`UnknownNonterminal` if ``p`` mentions a foreign nonterminal
    """
    s.check_polynomial(p)
    return series_output(p, s.output.__getitem__)


def poly_derivative(s: GrammarSystem, p: Polynomial, a: LetterName) -> Polynomial:
    """Derivative of a polynomial by a letter

    Uses ``{x w}_a = x_a {w} + o(x) {w}_a`` on monomials and extends linearly,
    coefficients included.

    Raises :class:`UnknownNonterminal` or :class:`UnknownLetter`
    """
    s.alphabet.check(a)
    s.check_polynomial(p)
    return series_derivative(p, a, s.output.__getitem__, lambda x, b: s.deriv[x, b])


def word_derivative(s: GrammarSystem, p: Polynomial, w: Iterable[LetterName]) -> Polynomial:
    for a in w:
        p = poly_derivative(s, p, a)
    return p


def coefficient(s: GrammarSystem, p: Polynomial, w: Iterable[LetterName]) -> Value:
    """Coefficient of ``w`` in the series denoted by ``p``

    Over the Boolean semiring, this tells whether ``w`` belongs to the language.
    """
    return poly_output(s, word_derivative(s, p, w))


def accepts(s: GrammarSystem, p: Polynomial, w: Iterable[LetterName]) -> bool:
    """Weighted acceptance: the coefficient of ``w`` is nonzero"""
    return not s.semiring.is_zero(coefficient(s, p, w))


def enumerate_series(
    s: GrammarSystem, p: Polynomial, maxlen: int
) -> List[Tuple[Word, Value]]:
    """Words of length at most ``maxlen`` with a nonzero coefficient

    Words come in length-then-alphabet order, derivatives are shared between
    words with a common prefix.
    """
    if maxlen < 0:
        raise ValueError("`maxlen` must be nonnegative")
    K = s.semiring
    result = []
    level: List[Tuple[Word, Polynomial]] = [((), p)]
    for length in range(maxlen + 1):
        for word, poly in level:
            value = poly_output(s, poly)
            if not K.is_zero(value):
                result.append((word, value))
        if length == maxlen:
            break
        level = [
            (word + (a,), poly_derivative(s, poly, a))
            for word, poly in level
            if poly
            for a in s.alphabet
        ]
    return result


class OracleResult(enum.Enum):
    YES = "yes"
    NO_WITHIN_BOUND = "no-within-bound"


def default_oracle_steps(g: CFGrammar, w: Sequence[LetterName]) -> int:
    return 4 * (len(w) + 1) * max(len(g.nonterminals), 1)


def derivation_oracle(
    g: CFGrammar,
    start: Iterable[Nonterminal],
    w: Iterable[LetterName],
    max_steps: Optional[int] = None,
) -> OracleResult:
    """Search for a leftmost derivation ``start ⇒* w`` of at most ``max_steps`` steps

    Sentential forms ``u v`` (``u`` terminal, ``v`` nonterminal) are explored
    breadth-first, dropping those whose terminal prefix ``u`` is not a prefix of
    ``w``. The answer is one-sided: :attr:`OracleResult.NO_WITHIN_BOUND` does
    not prove that ``w`` is outside the language.
    """
    if g.weak:
        raise ValueError("The derivation oracle requires a strict GNF grammar")
    g.check_gnf()
    w = g.alphabet.check_word(w)
    start = tuple(start)
    for x in start:
        if x not in g.productions:
            raise UnknownNonterminal(x)
    if max_steps is None:
        max_steps = default_oracle_steps(g, w)
    if max_steps < 0:
        raise ValueError("`max_steps` must be nonnegative")

    initial = (0, start)
    seen = {initial}
    queue = deque([(initial, 0)])
    while queue:
        (pos, rest), steps = queue.popleft()
        if not rest:
            if pos == len(w):
                logger.debug("Derivation of %r found in %d steps", w, steps)
                return OracleResult.YES
            continue
        if steps == max_steps:
            continue
        head, tail = rest[0], rest[1:]
        for body in g.productions[head]:
            if not body:
                nxt = (pos, tail)
            elif pos < len(w) and body[0] == w[pos]:
                nxt = (pos + 1, body[1:] + tail)
            else:
                continue
            if nxt not in seen:
                seen.add(nxt)
                queue.append((nxt, steps + 1))
    logger.debug("No derivation of %r within %d steps", w, max_steps)
    return OracleResult.NO_WITHIN_BOUND
