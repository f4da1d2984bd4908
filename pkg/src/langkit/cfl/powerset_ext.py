"""Weak GNF systems and the semiring of behaviour pairs

In weak Greibach normal form, production tails may mix nonterminals and letters,
so derivatives are finite languages of mixed words. Behaviour pairs
``(o, δ)`` with ``δ(a)`` such a language form an idempotent semiring under
:func:`oplus` and :func:`otimes`; folding a language through it must give the
same pair as the derivative structure of :func:`weak_gnf_extension`.
"""

import functools
import logging
import random
from dataclasses import dataclass, field
from typing import (
    Callable,
    Dict,
    FrozenSet,
    Iterable,
    List,
    Mapping,
    Sequence,
    Tuple,
    Union,
)

from .grammar import (
    Alphabet,
    AlphabetMismatch,
    CFGrammar,
    GrammarSystem,
    LetterName,
    NonBooleanSemiring,
    NotGNF,
)
from .semiring import BOOLEAN

logger = logging.getLogger(__name__)


class UnknownSymbol(ValueError):
    def __init__(self, symbol: object):
        super().__init__(f"Unknown symbol {symbol!s}")
        self.symbol = symbol


@dataclass(frozen=True)
class NonterminalSymbol:
    """Nonterminal occurring in a mixed word"""

    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class LetterSymbol:
    """Letter occurring in a mixed word"""

    name: LetterName

    def __str__(self) -> str:
        return self.name


MixedSymbol = Union[NonterminalSymbol, LetterSymbol]
MixedWord = Tuple[MixedSymbol, ...]
MixedLanguage = FrozenSet[MixedWord]

EMPTY: MixedLanguage = frozenset()
EPSILON: MixedLanguage = frozenset({()})


def indicator(bit: bool) -> MixedLanguage:
    return EPSILON if bit else EMPTY


def concat(left: Iterable[MixedWord], right: Iterable[MixedWord]) -> MixedLanguage:
    right = list(right)
    return frozenset(u + v for u in left for v in right)


def format_word(word: MixedWord) -> str:
    return " ".join(str(sym) for sym in word) or "_"


def format_language(language: Iterable[MixedWord]) -> str:
    words = sorted(format_word(w) for w in language)
    return "{" + ", ".join(words) + "}"


class BehaviourPair:
    """Output bit and one finite mixed language per letter"""

    __slots__ = ("alphabet", "out", "_der")

    def __init__(
        self,
        alphabet: Alphabet,
        out: bool,
        der: Mapping[LetterName, Iterable[MixedWord]] = {},
    ):
        for a in der:
            alphabet.check(a)
        self.alphabet = alphabet
        self.out = bool(out)
        self._der: Tuple[MixedLanguage, ...] = tuple(
            frozenset(tuple(w) for w in der.get(a, ())) for a in alphabet
        )

    @classmethod
    def zero(cls, alphabet: Alphabet) -> "BehaviourPair":
        return cls(alphabet, False)

    @classmethod
    def one(cls, alphabet: Alphabet) -> "BehaviourPair":
        return cls(alphabet, True)

    def der(self, a: LetterName) -> MixedLanguage:
        return self._der[self.alphabet.index(a)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BehaviourPair):
            return NotImplemented
        return (
            self.alphabet == other.alphabet
            and self.out == other.out
            and self._der == other._der
        )

    def __hash__(self) -> int:
        return hash((self.alphabet, self.out, self._der))

    def __repr__(self) -> str:
        der = ", ".join(
            f"{a}: {format_language(lang)}" for a, lang in zip(self.alphabet, self._der)
        )
        return f"BehaviourPair({int(self.out)}, {{{der}}})"


def _check_alphabets(p: BehaviourPair, q: BehaviourPair):
    if p.alphabet != q.alphabet:
        raise AlphabetMismatch(p.alphabet, q.alphabet)


def oplus(p: BehaviourPair, q: BehaviourPair) -> BehaviourPair:
    """``(o1 ∨ o2, λa. δ1(a) ∪ δ2(a))``"""
    _check_alphabets(p, q)
    return BehaviourPair(
        p.alphabet, p.out or q.out, {a: p.der(a) | q.der(a) for a in p.alphabet}
    )


def reexpand(p: BehaviourPair) -> MixedLanguage:
    """Mixed language ``i(o) ∪ ⋃_b {b} δ(b)`` described by a behaviour pair"""
    words = set(indicator(p.out))
    for b in p.alphabet:
        words.update((LetterSymbol(b),) + w for w in p.der(b))
    return frozenset(words)


def otimes(p: BehaviourPair, q: BehaviourPair) -> BehaviourPair:
    """``(o1 ∧ o2, λa. δ1(a) (i(o2) ∪ ⋃_b {b} δ2(b)) ∪ i(o1) δ2(a))``"""
    _check_alphabets(p, q)
    tail = reexpand(q)
    return BehaviourPair(
        p.alphabet,
        p.out and q.out,
        {
            a: concat(p.der(a), tail) | (q.der(a) if p.out else EMPTY)
            for a in p.alphabet
        },
    )


class WeakGNFSystem:
    """Boolean coalgebra whose derivatives are finite languages of mixed words"""

    def __init__(
        self,
        alphabet: Alphabet,
        nonterminals: Sequence[str],
        output: Mapping[str, bool],
        deriv: Mapping[Tuple[str, LetterName], Iterable[MixedWord]],
    ):
        self.alphabet = alphabet
        self.nonterminals: Tuple[str, ...] = tuple(nonterminals)
        for x in output:
            self.check_symbol(NonterminalSymbol(x))
        self.output: Dict[str, bool] = {
            x: bool(output.get(x, False)) for x in self.nonterminals
        }
        for x, a in deriv:
            self.check_symbol(NonterminalSymbol(x))
            alphabet.check(a)
        self.deriv: Dict[Tuple[str, LetterName], MixedLanguage] = {}
        for x in self.nonterminals:
            for a in alphabet:
                language = frozenset(tuple(w) for w in deriv.get((x, a), ()))
                for word in language:
                    self.check_word(word)
                self.deriv[x, a] = language

    def check_symbol(self, symbol: object):
        if isinstance(symbol, NonterminalSymbol) and symbol.name in self.nonterminals:
            return
        if isinstance(symbol, LetterSymbol) and symbol.name in self.alphabet:
            return
        raise UnknownSymbol(symbol)

    def check_word(self, word: MixedWord):
        for symbol in word:
            self.check_symbol(symbol)

    def symbols(self) -> List[MixedSymbol]:
        return [NonterminalSymbol(x) for x in self.nonterminals] + [LetterSymbol(a) for a in self.alphabet]

    @classmethod
    def lift(cls, s: GrammarSystem) -> "WeakGNFSystem":
        """View a Boolean grammar system as a weak GNF system"""
        if s.semiring != BOOLEAN:
            raise NonBooleanSemiring(s.semiring)
        deriv = {
            (str(x), a): [
                tuple(NonterminalSymbol(str(y)) for y in word)
                for word in s.deriv[x, a].words()
            ]
            for x in s.nonterminals
            for a in s.alphabet
        }
        output = {str(x): s.output[x] for x in s.nonterminals}
        return cls(s.alphabet, list(output), output, deriv)

    @classmethod
    def from_grammar(cls, g: CFGrammar) -> "WeakGNFSystem":
        """Read a (weak) GNF grammar: ``x_a`` collects the tails of ``x → a w``"""
        for x, bodies in g.productions.items():
            for body in bodies:
                if body and body[0] not in g.alphabet:
                    raise NotGNF(x, body)

        def tag(sym) -> MixedSymbol:
            return LetterSymbol(sym) if sym in g.alphabet else NonterminalSymbol(sym)

        deriv = {
            (x, a): [
                tuple(tag(sym) for sym in body[1:])
                for body in bodies
                if body and body[0] == a
            ]
            for x, bodies in g.productions.items()
            for a in g.alphabet
        }
        output = {x: () in bodies for x, bodies in g.productions.items()}
        return cls(g.alphabet, g.nonterminals, output, deriv)

    def image(self, symbol: MixedSymbol) -> BehaviourPair:
        """Behaviour pair of a single symbol"""
        self.check_symbol(symbol)
        if isinstance(symbol, NonterminalSymbol):
            return BehaviourPair(
                self.alphabet,
                self.output[symbol.name],
                {a: self.deriv[symbol.name, a] for a in self.alphabet},
            )
        return BehaviourPair(self.alphabet, False, {symbol.name: EPSILON})


class WeakGNFAutomaton:
    """Derivative structure on finite languages of mixed words"""

    def __init__(self, system: WeakGNFSystem):
        self.system = system
        self.alphabet = system.alphabet
        self._word_output = functools.lru_cache(maxsize=None)(self._compute_word_output)
        self._word_derivative = functools.lru_cache(maxsize=None)(
            self._compute_word_derivative
        )

    def _compute_word_output(self, word: MixedWord) -> bool:
        if not word:
            return True
        head, rest = word[0], word[1:]
        if isinstance(head, LetterSymbol):
            return False
        return self.system.output[head.name] and self._word_output(rest)

    def _reexpand_word(self, word: MixedWord) -> MixedLanguage:
        words = set(indicator(self._word_output(word)))
        for b in self.alphabet:
            words.update((LetterSymbol(b),) + w for w in self._word_derivative(word, b))
        return frozenset(words)

    def _compute_word_derivative(self, word: MixedWord, a: LetterName) -> MixedLanguage:
        if not word:
            return EMPTY
        head, rest = word[0], word[1:]
        if isinstance(head, LetterSymbol):
            return self._reexpand_word(rest) if head.name == a else EMPTY
        result = concat(self.system.deriv[head.name, a], self._reexpand_word(rest))
        if self.system.output[head.name]:
            result = result | self._word_derivative(rest, a)
        return result

    def output(self, language: Iterable[MixedWord]) -> bool:
        """``ô(S)``: whether some word of ``S`` has output 1

        Raises :class:`UnknownSymbol` for foreign symbols
        """
        words = [tuple(w) for w in language]
        for word in words:
            self.system.check_word(word)
        return any(self._word_output(word) for word in words)

    def derivative(self, language: Iterable[MixedWord], a: LetterName) -> MixedLanguage:
        """``δ̂(S)(a)``, the union of the derivatives of the words of ``S``"""
        self.alphabet.check(a)
        result: set = set()
        for word in language:
            word = tuple(word)
            self.system.check_word(word)
            result.update(self._word_derivative(word, a))
        return frozenset(result)

    def behaviour(self, language: Iterable[MixedWord]) -> BehaviourPair:
        language = [tuple(w) for w in language]
        return BehaviourPair(
            self.alphabet,
            self.output(language),
            {a: self.derivative(language, a) for a in self.alphabet},
        )


def weak_gnf_extension(s: WeakGNFSystem) -> WeakGNFAutomaton:
    return WeakGNFAutomaton(s)


def fold_language(s: WeakGNFSystem, language: Iterable[MixedWord]) -> BehaviourPair:
    """Image of ``S`` under the semiring morphism extending the symbol images

    Words are folded with :func:`otimes` from the unit, and the results summed
    with :func:`oplus` from the zero.
    """
    total = BehaviourPair.zero(s.alphabet)
    for word in language:
        current = BehaviourPair.one(s.alphabet)
        for symbol in word:
            current = otimes(current, s.image(symbol))
        total = oplus(total, current)
    return total


Law = Callable[..., Tuple[object, object]]


def _laws(alphabet: Alphabet) -> Dict[str, Tuple[int, Law]]:
    zero = BehaviourPair.zero(alphabet)
    one = BehaviourPair.one(alphabet)
    return {
        "oplus-left-unit": (1, lambda p: (oplus(zero, p), p)),
        "oplus-right-unit": (1, lambda p: (oplus(p, zero), p)),
        "oplus-commutative": (2, lambda p, q: (oplus(p, q), oplus(q, p))),
        "oplus-associative": (
            3,
            lambda p, q, r: (oplus(oplus(p, q), r), oplus(p, oplus(q, r))),
        ),
        "otimes-left-unit": (1, lambda p: (otimes(one, p), p)),
        "otimes-right-unit": (1, lambda p: (otimes(p, one), p)),
        "otimes-associative": (
            3,
            lambda p, q, r: (otimes(otimes(p, q), r), otimes(p, otimes(q, r))),
        ),
        "left-distributive": (
            3,
            lambda p, q, r: (otimes(p, oplus(q, r)), oplus(otimes(p, q), otimes(p, r))),
        ),
        "right-distributive": (
            3,
            lambda p, q, r: (otimes(oplus(p, q), r), oplus(otimes(p, r), otimes(q, r))),
        ),
        "left-annihilation": (1, lambda p: (otimes(zero, p), zero)),
        "right-annihilation": (1, lambda p: (otimes(p, zero), zero)),
        "idempotence": (1, lambda p: (oplus(p, p), p)),
        "reexpand-morphism": (
            2,
            lambda p, q: (reexpand(otimes(p, q)), concat(reexpand(p), reexpand(q))),
        ),
    }


LAW_NAMES = tuple(_laws(Alphabet(["a"])))
AGREEMENT = "fold-agreement"


@dataclass
class LawViolation:
    law: str
    operands: Tuple[object, ...]
    lhs: object
    rhs: object

    def __str__(self) -> str:
        operands = "; ".join(
            format_language(op) if isinstance(op, frozenset) else repr(op)
            for op in self.operands
        )
        return f"{self.law}: {operands}"


@dataclass
class SemiringReport:
    """Outcome of :func:`check_semiring_agreement`"""

    seed: int
    samples: int
    checks: Dict[str, int] = field(default_factory=dict)
    violations: List[LawViolation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def lines(self) -> List[str]:
        result = []
        for name, count in self.checks.items():
            failed = sum(1 for v in self.violations if v.law == name)
            status = "ok" if not failed else f"FAILED ({failed})"
            result.append(f"{name}: {count} checks, {status}")
        for violation in self.violations:
            result.append(f"counterexample {violation}")
        return result


def random_word(
    rng: random.Random, symbols: Sequence[MixedSymbol], max_length: int
) -> MixedWord:
    return tuple(rng.choice(symbols) for _ in range(rng.randint(0, max_length)))


def random_language(
    rng: random.Random,
    symbols: Sequence[MixedSymbol],
    max_words: int = 3,
    max_length: int = 3,
) -> MixedLanguage:
    return frozenset(
        random_word(rng, symbols, max_length) for _ in range(rng.randint(0, max_words))
    )


def random_pair(
    rng: random.Random,
    alphabet: Alphabet,
    symbols: Sequence[MixedSymbol],
    max_words: int = 3,
    max_length: int = 3,
) -> BehaviourPair:
    return BehaviourPair(
        alphabet,
        rng.random() < 0.5,
        {a: random_language(rng, symbols, max_words, max_length) for a in alphabet},
    )


def check_semiring_agreement(
    s: WeakGNFSystem,
    samples: int = 1000,
    seed: int = 0,
    max_words: int = 3,
    max_length: int = 3,
) -> SemiringReport:
    """Check the semiring laws of behaviour pairs and the fold agreement

    Every law is checked on ``samples`` random operands drawn from a generator
    seeded with ``seed``; so is the equality of :func:`fold_language` and the
    behaviour given by :func:`weak_gnf_extension` on random languages.
    """
    rng = random.Random(seed)
    symbols = s.symbols()
    report = SemiringReport(seed=seed, samples=samples)
    for name, (arity, law) in _laws(s.alphabet).items():
        report.checks[name] = samples
        for _ in range(samples):
            operands = tuple(
                random_pair(rng, s.alphabet, symbols, max_words, max_length)
                for _ in range(arity)
            )
            lhs, rhs = law(*operands)
            if lhs != rhs:
                report.violations.append(LawViolation(name, operands, lhs, rhs))
        logger.debug("Checked %s on %d samples", name, samples)

    automaton = weak_gnf_extension(s)
    report.checks[AGREEMENT] = samples
    for _ in range(samples):
        language = random_language(rng, symbols, max_words, max_length)
        folded = fold_language(s, language)
        direct = automaton.behaviour(language)
        if folded != direct:
            report.violations.append(
                LawViolation(AGREEMENT, (language,), folded, direct)
            )
    logger.debug("Agreement checked on %d languages", samples)
    return report
