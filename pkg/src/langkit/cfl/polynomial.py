from typing import (
    Any,
    Callable,
    Dict,
    Hashable,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Tuple,
)

from .semiring import BOOLEAN, Semiring, Value, check_same_semiring

Symbol = Hashable
Monomial = Tuple[Symbol, ...]


class Polynomial:
    """Noncommuting polynomial with coefficients in a semiring

    A polynomial is a finite map from words over some symbols (monomials, as
    tuples) to nonzero coefficients. Over the Boolean semiring this is a finite
    language. Instances are immutable.

    >>> p = Polynomial.from_words([("x", "y"), ()])
    >>> sorted(p.words())
    [(), ('x', 'y')]
    >>> (p * Polynomial.from_words([("z",)])).coefficient(("x", "y", "z"))
    True
    """

    __slots__ = ("semiring", "_terms", "_hash")

    def __init__(
        self, semiring: Semiring = BOOLEAN, terms: Mapping[Monomial, Value] = {}
    ):
        self.semiring = semiring
        self._terms: Dict[Monomial, Value] = {
            tuple(word): coeff
            for word, coeff in terms.items()
            if not semiring.is_zero(coeff)
        }
        self._hash: Optional[int] = None
        assert not any(semiring.is_zero(c) for c in self._terms.values())

    @classmethod
    def zero(cls, semiring: Semiring = BOOLEAN) -> "Polynomial":
        return cls(semiring)

    @classmethod
    def unit(cls, semiring: Semiring = BOOLEAN) -> "Polynomial":
        """The polynomial ``1·ε``"""
        return cls(semiring, {(): semiring.one})

    @classmethod
    def constant(cls, value: Value, semiring: Semiring = BOOLEAN) -> "Polynomial":
        return cls(semiring, {(): value})

    @classmethod
    def monomial(
        cls,
        word: Iterable[Symbol],
        coeff: Optional[Value] = None,
        semiring: Semiring = BOOLEAN,
    ) -> "Polynomial":
        if coeff is None:
            coeff = semiring.one
        return cls(semiring, {tuple(word): coeff})

    @classmethod
    def from_words(
        cls, words: Iterable[Iterable[Symbol]], semiring: Semiring = BOOLEAN
    ) -> "Polynomial":
        """Sum of the given words, each with coefficient 1"""
        acc = _Accumulator(semiring)
        for word in words:
            acc.add(tuple(word), semiring.one)
        return acc.result()

    def coefficient(self, word: Iterable[Symbol]) -> Value:
        return self._terms.get(tuple(word), self.semiring.zero)

    def words(self) -> Iterator[Monomial]:
        return iter(self._terms)

    def items(self) -> Iterator[Tuple[Monomial, Value]]:
        return iter(self._terms.items())

    def symbols(self) -> set:
        return {sym for word in self._terms for sym in word}

    def is_zero(self) -> bool:
        return not self._terms

    def sorted_items(
        self, key: Callable[[Symbol], Any] = lambda sym: sym
    ) -> List[Tuple[Monomial, Value]]:
        """Terms in length-lexicographic order, symbols compared through ``key``"""
        return sorted(
            self._terms.items(),
            key=lambda item: (len(item[0]), [key(sym) for sym in item[0]]),
        )

    def scale(self, value: Value) -> "Polynomial":
        K = self.semiring
        return Polynomial(K, {w: K.mul(value, c) for w, c in self._terms.items()})

    def __add__(self, other: "Polynomial") -> "Polynomial":
        check_same_semiring(self.semiring, other.semiring)
        acc = _Accumulator(self.semiring, self._terms)
        for word, coeff in other._terms.items():
            acc.add(word, coeff)
        return acc.result()

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        check_same_semiring(self.semiring, other.semiring)
        K = self.semiring
        acc = _Accumulator(K)
        for lword, lcoeff in self._terms.items():
            for rword, rcoeff in other._terms.items():
                acc.add(lword + rword, K.mul(lcoeff, rcoeff))
        return acc.result()

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.semiring == other.semiring and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.semiring, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        terms = ", ".join(
            f"{word!r}: {coeff!r}" for word, coeff in self.sorted_items(key=repr)
        )
        return f"Polynomial({self.semiring.name}, {{{terms}}})"


class _Accumulator:
    """Mutable helper summing terms before freezing them into a polynomial"""

    def __init__(self, semiring: Semiring, terms: Mapping[Monomial, Value] = {}):
        self.semiring = semiring
        self.terms: Dict[Monomial, Value] = dict(terms)

    def add(self, word: Monomial, coeff: Value):
        if self.semiring.is_zero(coeff):
            return
        if word in self.terms:
            self.terms[word] = self.semiring.add(self.terms[word], coeff)
        else:
            self.terms[word] = coeff

    def result(self) -> Polynomial:
        return Polynomial(self.semiring, self.terms)


def polynomial_sum(
    polys: Iterable[Polynomial], semiring: Semiring = BOOLEAN
) -> Polynomial:
    acc = _Accumulator(semiring)
    for poly in polys:
        check_same_semiring(semiring, poly.semiring)
        for word, coeff in poly.items():
            acc.add(word, coeff)
    return acc.result()


def series_output(p: Polynomial, output: Callable[[Symbol], Value]) -> Value:
    """``Σ k_w · ô(w)`` with ``ô(x w) = o(x) · ô(w)``, symbol outputs given by ``output``"""
    K = p.semiring
    total = K.zero
    for word, coeff in p.items():
        value = coeff
        for sym in word:
            if K.is_zero(value):
                break
            value = K.mul(value, output(sym))
        total = K.add(total, value)
    return total


def series_derivative(
    p: Polynomial,
    a: Hashable,
    output: Callable[[Symbol], Value],
    derivative: Callable[[Symbol, Hashable], Polynomial],
) -> Polynomial:
    """Derivative by ``a`` through ``{x w}_a = x_a {w} + o(x) {w}_a``, extended linearly

    Symbol outputs and derivatives are given by ``output`` and ``derivative``.
    """
    K = p.semiring
    acc = _Accumulator(K)
    for word, coeff in p.items():
        prefix = coeff
        for i, sym in enumerate(word):
            rest = word[i + 1 :]
            for tail, tcoeff in derivative(sym, a).items():
                acc.add(tail + rest, K.mul(prefix, tcoeff))
            prefix = K.mul(prefix, output(sym))
            if K.is_zero(prefix):
                break
    return acc.result()
