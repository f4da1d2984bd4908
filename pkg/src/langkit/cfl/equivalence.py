"""Behavioural equivalence between states of any representation

States of grammar systems, term systems and μ-expressions share one interface:
an output and a derivative per letter. :func:`word_equiv` compares coefficients
of all words up to a length, :func:`bisim_upto` searches for a finite
bisimulation up to sums, which proves equivalence outright.
"""

import copy
import logging
from abc import ABC, abstractmethod
from collections import deque
from dataclasses import dataclass, field
from typing import Deque, FrozenSet, Hashable, Iterable, Iterator, List, Optional, Set, Tuple

from .grammar import (
    Alphabet,
    AlphabetMismatch,
    GrammarSystem,
    LetterName,
    Word,
    poly_derivative,
    poly_output,
)
from .muexpr import mu_normal_derivative, mu_normal_output, validate
from .polynomial import Polynomial
from .semiring import Semiring, Value, check_same_semiring
from .terms import (
    Term,
    TermSystem,
    from_normal_form,
    normal_form,
    term_normal_derivative,
    term_normal_output,
)

logger = logging.getLogger(__name__)

DEFAULT_NODE_BUDGET = 1000


class State(ABC):
    """A state of some coalgebra over ``alphabet`` with coefficients in ``semiring``"""

    alphabet: Alphabet
    semiring: Semiring

    @abstractmethod
    def output(self) -> Value:
        raise NotImplementedError

    @abstractmethod
    def derivative(self, a: LetterName) -> "State":
        raise NotImplementedError

    @abstractmethod
    def key(self) -> Hashable:
        """Identity of the state within its representation"""
        raise NotImplementedError

    def normalized(self) -> "State":
        """A bisimilar state in canonical form"""
        return self

    def summands(self) -> Tuple["State", ...]:
        """Decomposition of a normalized state into summands"""
        return (self,)

    def is_zero(self) -> bool:
        """Whether the state is syntactically zero, making all its derivatives zero"""
        return not self.summands()

    def word_derivative(self, w: Iterable[LetterName]) -> "State":
        state = self
        for a in w:
            state = state.derivative(a).normalized()
        return state

    def coefficient(self, w: Iterable[LetterName]) -> Value:
        return self.word_derivative(w).output()

    def iter_series(self, maxlen: Optional[int] = None) -> Iterator[Tuple[Word, Value]]:
        """Words with nonzero coefficient, in length-then-alphabet order

        Without ``maxlen`` the enumeration only stops once every remaining
        derivative is zero.
        """
        if maxlen is not None and maxlen < 0:
            raise ValueError("`maxlen` must be nonnegative")
        K = self.semiring
        level: List[Tuple[Word, State]] = [((), self.normalized())]
        length = 0
        while level:
            for word, state in level:
                value = state.output()
                if not K.is_zero(value):
                    yield word, value
            if length == maxlen:
                return
            level = [
                (word + (a,), state.derivative(a).normalized())
                for word, state in level
                if not state.is_zero()
                for a in self.alphabet
            ]
            length += 1

    def series(self, maxlen: int) -> List[Tuple[Word, Value]]:
        """Words of length at most ``maxlen`` with nonzero coefficient"""
        return list(self.iter_series(maxlen))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, State):
            return NotImplemented
        return type(self) is type(other) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash((type(self), self.key()))


class GrammarState(State):
    """Polynomial in a grammar system"""

    def __init__(self, system: GrammarSystem, poly: Polynomial):
        system.check_polynomial(poly)
        self.system = system
        self.poly = poly
        self.alphabet = system.alphabet
        self.semiring = system.semiring

    def output(self) -> Value:
        return poly_output(self.system, self.poly)

    def derivative(self, a: LetterName) -> "GrammarState":
        return GrammarState(self.system, poly_derivative(self.system, self.poly, a))

    def key(self) -> Hashable:
        return (id(self.system), self.poly)

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def summands(self) -> Tuple[State, ...]:
        K = self.semiring
        return tuple(
            GrammarState(self.system, Polynomial.monomial(word, coeff, K))
            for word, coeff in self.poly.sorted_items(key=self.system.sort_key)
        )

    def __repr__(self) -> str:
        return f"GrammarState({self.poly!r})"


class _NormalFormState(State):
    """State held as a normal form, a polynomial over atoms

    Derivatives are computed on the normal form directly, so states never need
    normalizing and terms are never rebuilt.
    """

    nf: Polynomial

    @property
    def term(self) -> Term:
        return from_normal_form(self.nf)

    def _with(self, nf: Polynomial) -> State:
        state = copy.copy(self)
        state.nf = nf
        return state

    def is_zero(self) -> bool:
        return self.nf.is_zero()

    def summands(self) -> Tuple[State, ...]:
        K = self.semiring
        return tuple(
            self._with(Polynomial.monomial(word, coeff, K))
            for word, coeff in self.nf.sorted_items(key=str)
        )

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.term})"


class TermState(_NormalFormState):
    """Term in a term system"""

    def __init__(self, system: TermSystem, term: Term):
        system.check_term(term)
        self.system = system
        self.alphabet = system.alphabet
        self.semiring = system.semiring
        self.nf = normal_form(term, system.semiring)

    def output(self) -> Value:
        return term_normal_output(self.system, self.nf)

    def derivative(self, a: LetterName) -> State:
        return self._with(term_normal_derivative(self.system, self.nf, a))

    def key(self) -> Hashable:
        return (id(self.system), self.nf)


class MuState(_NormalFormState):
    """Closed guarded μ-expression"""

    def __init__(self, expr: Term, alphabet: Alphabet, semiring: Semiring, checked: bool = False):
        if not checked:
            validate(expr)
        self.alphabet = alphabet
        self.semiring = semiring
        self.nf = normal_form(expr, semiring)

    def output(self) -> Value:
        return mu_normal_output(self.nf)

    def derivative(self, a: LetterName) -> State:
        self.alphabet.check(a)
        return self._with(mu_normal_derivative(self.nf, a))

    def key(self) -> Hashable:
        return (self.alphabet, self.nf)


Pair = Tuple[State, State]


class EquivResult:
    exit_code: int = 0


@dataclass(frozen=True)
class Equivalent(EquivResult):
    """No difference found: up to ``checked_to`` letters, or for good with a ``relation``"""

    checked_to: Optional[int] = None
    relation: Optional[FrozenSet[Pair]] = field(default=None, compare=False, repr=False)
    exit_code = 0

    def __str__(self) -> str:
        if self.checked_to is not None:
            return f"equivalent (checked up to length {self.checked_to})"
        size = 0 if self.relation is None else len(self.relation)
        return f"equivalent (bisimulation up to sums with {size} pairs)"


@dataclass(frozen=True)
class Inequivalent(EquivResult):
    """The two states give different coefficients to ``witness``"""

    witness: Word
    exit_code = 1

    def __str__(self) -> str:
        return f"inequivalent: witness {''.join(self.witness) or '_'}"


@dataclass(frozen=True)
class Unknown(EquivResult):
    """The search ran out of budget"""

    explored: int
    exit_code = 2

    def __str__(self) -> str:
        return f"unknown: budget exhausted after {self.explored} pairs"


def check_compatible(s1: State, s2: State):
    """Raise :class:`AlphabetMismatch` or :class:`SemiringMismatch` if the states cannot be compared"""
    if not s1.alphabet.same_letters(s2.alphabet):
        raise AlphabetMismatch(s1.alphabet, s2.alphabet)
    check_same_semiring(s1.semiring, s2.semiring)


def _verify_witness(s1: State, s2: State, witness: Word):
    K = s1.semiring
    if K.eq(s1.coefficient(witness), s2.coefficient(witness)):
        raise RuntimeError(f"Witness {witness!r} does not separate the states")


def word_equiv(s1: State, s2: State, maxlen: int) -> EquivResult:
    """Compare coefficients of all words of length at most ``maxlen``

    Words are explored breadth-first in length-then-alphabet order, so the
    returned witness is a shortest one. Pairs of states already met on a
    shorter or earlier word are not explored again.
    """
    check_compatible(s1, s2)
    if maxlen < 0:
        raise ValueError("`maxlen` must be nonnegative")
    K = s1.semiring
    start = (s1.normalized(), s2.normalized())
    seen: Set[Pair] = {start}
    level: List[Tuple[Word, Pair]] = [((), start)]
    for length in range(maxlen + 1):
        for word, (p, q) in level:
            if not K.eq(p.output(), q.output()):
                logger.debug("Outputs differ after %r", word)
                _verify_witness(s1, s2, word)
                return Inequivalent(word)
        if length == maxlen:
            break
        following = []
        for word, (p, q) in level:
            for a in s1.alphabet:
                pair = (p.derivative(a).normalized(), q.derivative(a).normalized())
                if pair in seen:
                    continue
                seen.add(pair)
                following.append((word + (a,), pair))
        logger.debug("Length %d: %d new pairs", length + 1, len(following))
        level = following
        if not level:
            break
    return Equivalent(checked_to=maxlen)


def _matched(
    left: Tuple[State, ...], right: Tuple[State, ...], related, idempotent: bool
) -> bool:
    if idempotent:
        return all(any(related(p, q) for q in right) for p in left) and all(
            any(related(p, q) for p in left) for q in right
        )
    if len(left) != len(right):
        return False
    match: dict = {}

    def augment(i: int, visited: Set[int]) -> bool:
        for j, q in enumerate(right):
            if j in visited or not related(left[i], q):
                continue
            visited.add(j)
            if j not in match or augment(match[j], visited):
                match[j] = i
                return True
        return False

    return all(augment(i, set()) for i in range(len(left)))


def _discharged(p: State, q: State, relation: Set[Pair]) -> bool:
    def related(u: State, v: State) -> bool:
        return u == v or (u, v) in relation

    if related(p, q):
        return True
    left, right = p.summands(), q.summands()
    if len(left) <= 1 and len(right) <= 1:
        return False
    return _matched(left, right, related, p.semiring.idempotent)


def check_relation(relation: Iterable[Pair]) -> bool:
    """Whether ``relation`` is a bisimulation up to sums and normalization

    Every pair must have equal outputs, and the normalized derivatives of every
    pair must be discharged within the relation.
    """
    relation = set(relation)
    for p, q in relation:
        if not p.semiring.eq(p.output(), q.output()):
            return False
        for a in p.alphabet:
            if not _discharged(p.derivative(a).normalized(), q.derivative(a).normalized(), relation):
                return False
    return True


def bisim_upto(s1: State, s2: State, node_budget: int = DEFAULT_NODE_BUDGET) -> EquivResult:
    """Search for a finite bisimulation up to sums relating ``s1`` and ``s2``

    States are normalized at every step. A pair of derivatives is discharged
    when its components are equal, already related, or sums whose summands can
    be paired off within the relation. Otherwise the pair joins the relation,
    which may hold at most ``node_budget`` pairs.
    """
    check_compatible(s1, s2)
    K = s1.semiring
    start = (s1.normalized(), s2.normalized())
    relation: Set[Pair] = {start}
    queue: Deque[Tuple[Word, Pair]] = deque([((), start)])
    while queue:
        word, (p, q) = queue.popleft()
        if not K.eq(p.output(), q.output()):
            logger.debug("Mismatch after %r with %d pairs", word, len(relation))
            _verify_witness(s1, s2, word)
            return Inequivalent(word)
        for a in s1.alphabet:
            pair = (p.derivative(a).normalized(), q.derivative(a).normalized())
            if _discharged(*pair, relation):
                continue
            if len(relation) >= node_budget:
                logger.debug("Budget of %d pairs exhausted", node_budget)
                return Unknown(len(relation))
            relation.add(pair)
            queue.append((word + (a,), pair))
    logger.debug("Bisimulation found with %d pairs", len(relation))
    if not check_relation(relation):
        raise RuntimeError("Constructed relation is not a bisimulation")
    return Equivalent(relation=frozenset(relation))
