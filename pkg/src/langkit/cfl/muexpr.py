"""Closed guarded μ-expressions

A μ-expression is a term that may also contain binders ``μx.g`` whose body
``g`` is guarded: a sum of constants and products ``a × t`` starting with a
letter. Derivatives unfold binders on demand. This module also turns term
systems into closed expressions (:func:`canonical_assignment`, :func:`close`)
and closed expressions back into term systems (:func:`deconstruct`).
"""

import functools
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Set, Tuple

from .grammar import Alphabet, LetterName
from .polynomial import Polynomial, series_derivative, series_output
from .semiring import BOOLEAN, Semiring, Value, embed_indicator
from .terms import (
    Const,
    Letter,
    Prod,
    Sum,
    Term,
    TermSystem,
    Var,
    cached_hash,
    normal_form,
    simplify,
    sum_of,
    variables,
)

logger = logging.getLogger(__name__)

MEMO_SIZE = 4096


class Unguarded(ValueError):
    def __init__(self, expr: Term):
        super().__init__(f"Body of μ-binder is not guarded: {expr}")
        self.expr = expr


class NotClosed(ValueError):
    def __init__(self, names: Iterable[str]):
        self.names = sorted(names)
        super().__init__(f"Expression has free variables: {', '.join(self.names)}")


class UnknownVariable(ValueError):
    def __init__(self, name: str):
        super().__init__(f"No μ-expression assigned to variable {name!r}")
        self.name = name


class DuplicateBinder(ValueError):
    def __init__(self, name: str):
        super().__init__(f"Variable {name!r} is bound more than once")
        self.name = name


@cached_hash
@dataclass(frozen=True, repr=False)
class Mu(Term):
    """Binder ``μx.body``, the unique fixed point of a guarded body"""

    var: str
    body: Term

    @property
    def binder(self) -> str:
        return self.var

    def children(self) -> Tuple[Term, ...]:
        return (self.body,)

    def __repr__(self) -> str:
        return f"Mu({self.var!r}, {self.body!r})"


def check_guarded(e: Term) -> bool:
    """Whether ``e`` matches ``g ::= a × t | k | g + g``

    >>> check_guarded(Sum(Const(True), Prod(Letter("a"), Var("x"))))
    True
    >>> check_guarded(Var("x"))
    False
    """
    if isinstance(e, Const):
        return True
    if isinstance(e, Sum):
        return check_guarded(e.left) and check_guarded(e.right)
    if isinstance(e, Prod):
        return isinstance(e.left, Letter)
    return False


def free_variables(e: Term) -> Set[str]:
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, Mu):
        return free_variables(e.body) - {e.var}
    found: Set[str] = set()
    for child in e.children():
        found |= free_variables(child)
    return found


def binders(e: Term) -> Iterator[Mu]:
    """μ-subexpressions of ``e`` in left-to-right pre-order"""
    if isinstance(e, Mu):
        yield e
    for child in e.children():
        yield from binders(child)


def validate(e: Term):
    """Raise :class:`Unguarded` or :class:`NotClosed` unless ``e`` is closed and guarded"""
    for node in binders(e):
        if not check_guarded(node.body):
            raise Unguarded(node.body)
    free = free_variables(e)
    if free:
        raise NotClosed(free)


def substitute(e: Term, name: str, replacement: Term) -> Term:
    """Replace the free occurrences of ``name`` in ``e``

    ``replacement`` is expected to be closed, so no renaming is needed.
    """
    if isinstance(e, Var):
        return replacement if e.name == name else e
    if isinstance(e, Mu):
        if e.var == name:
            return e
        return Mu(e.var, substitute(e.body, name, replacement))
    if isinstance(e, Sum):
        return Sum(substitute(e.left, name, replacement), substitute(e.right, name, replacement))
    if isinstance(e, Prod):
        return Prod(substitute(e.left, name, replacement), substitute(e.right, name, replacement))
    return e


def unfold(e: Mu) -> Term:
    """``u[μx.u/x]`` for ``e = μx.u``"""
    return substitute(e.body, e.var, e)


@functools.lru_cache(maxsize=MEMO_SIZE)
def _output(e: Term, semiring: Semiring) -> Value:
    if isinstance(e, Const):
        return semiring.coerce(e.value)
    if isinstance(e, Letter):
        return semiring.zero
    if isinstance(e, Sum):
        return semiring.add(_output(e.left, semiring), _output(e.right, semiring))
    if isinstance(e, Prod):
        left = _output(e.left, semiring)
        # the right factor may unfold the enclosing binder again
        if semiring.is_zero(left):
            return semiring.zero
        return semiring.mul(left, _output(e.right, semiring))
    if isinstance(e, Mu):
        return _output(unfold(e), semiring)
    if isinstance(e, Var):
        raise NotClosed([e.name])
    raise TypeError(f"Not a μ-expression: {e!r}")


@functools.lru_cache(maxsize=MEMO_SIZE)
def _derivative(e: Term, a: LetterName, semiring: Semiring) -> Term:
    if isinstance(e, Const):
        return Const(semiring.zero)
    if isinstance(e, Letter):
        return Const(embed_indicator(e.name == a, semiring))
    if isinstance(e, Sum):
        return Sum(_derivative(e.left, a, semiring), _derivative(e.right, a, semiring))
    if isinstance(e, Prod):
        left = _output(e.left, semiring)
        first = Prod(_derivative(e.left, a, semiring), e.right)
        if semiring.is_zero(left):
            # 0 × t behaves as 0, t_a is never needed
            return Sum(first, Const(semiring.zero))
        return Sum(first, Prod(Const(left), _derivative(e.right, a, semiring)))
    if isinstance(e, Mu):
        return _derivative(unfold(e), a, semiring)
    if isinstance(e, Var):
        raise NotClosed([e.name])
    raise TypeError(f"Not a μ-expression: {e!r}")


def mu_output(e: Term, semiring: Semiring = BOOLEAN) -> Value:
    """Output of a closed guarded expression

    >>> anbn = Mu("x", Sum(Const(True), Prod(Letter("a"), Prod(Var("x"), Letter("b")))))
    >>> mu_output(anbn)
    True
    """
    validate(e)
    return _output(e, semiring)


def mu_derivative(e: Term, a: LetterName, semiring: Semiring = BOOLEAN) -> Term:
    """Derivative of a closed guarded expression by ``a``

    Follows the product rule ``(σ × υ)_a = (σ_a × υ) + (j(o(σ)) × υ_a)`` and
    unfolds ``μx.u`` into ``u[μx.u/x]``; when ``o(σ)`` is zero the second summand
    is the zero constant.
    """
    validate(e)
    return _derivative(e, a, semiring)


def mu_word_derivative(
    e: Term, w: Iterable[LetterName], semiring: Semiring = BOOLEAN, simplified: bool = True
) -> Term:
    validate(e)
    for a in w:
        e = _derivative(e, a, semiring)
        if simplified:
            e = simplify(e, semiring)
    return e


@functools.lru_cache(maxsize=MEMO_SIZE)
def _atom_derivative(atom: Term, a: LetterName, semiring: Semiring) -> Polynomial:
    return normal_form(_derivative(atom, a, semiring), semiring)


def mu_normal_output(p: Polynomial) -> Value:
    """Output of a normal form over the atoms of closed expressions"""
    return series_output(p, lambda atom: _output(atom, p.semiring))


def mu_normal_derivative(p: Polynomial, a: LetterName) -> Polynomial:
    """Derivative of a normal form over the atoms of closed expressions

    Each atom is a letter or a binder ``μx.g``, whose derivative is read off
    its unfolding. Derivatives of atoms are memoized.
    """
    return series_derivative(
        p,
        a,
        lambda atom: _output(atom, p.semiring),
        lambda atom, b: _atom_derivative(atom, b, p.semiring),
    )


def mu_coefficient(e: Term, w: Iterable[LetterName], semiring: Semiring = BOOLEAN) -> Value:
    """Coefficient of ``w``, computed by derivatives of normal forms then output"""
    validate(e)
    p = normal_form(e, semiring)
    for a in w:
        p = mu_normal_derivative(p, a)
    return mu_normal_output(p)


def mu_series(
    e: Term, alphabet: Alphabet, maxlen: int, semiring: Semiring = BOOLEAN
) -> List[Tuple[Tuple[LetterName, ...], Value]]:
    if maxlen < 0:
        raise ValueError("`maxlen` must be nonnegative")
    validate(e)
    result = []
    level = [((), normal_form(e, semiring))]
    for length in range(maxlen + 1):
        for word, p in level:
            value = mu_normal_output(p)
            if not semiring.is_zero(value):
                result.append((word, value))
        if length == maxlen:
            break
        level = [
            (word + (a,), mu_normal_derivative(p, a)) for word, p in level if p for a in alphabet
        ]
    return result


def clear_cache():
    """Drop memoized outputs and derivatives"""
    _output.cache_clear()
    _derivative.cache_clear()
    _atom_derivative.cache_clear()


class MuAssignment(Mapping):
    """Map from variables to guarded expressions

    Raises :class:`Unguarded` if an image is not guarded
    """

    def __init__(self, images: Mapping[str, Term]):
        for name, image in images.items():
            if not check_guarded(image):
                raise Unguarded(image)
        self._images: Dict[str, Term] = dict(images)

    def __getitem__(self, name: str) -> Term:
        return self._images[name]

    def __iter__(self):
        return iter(self._images)

    def __len__(self) -> int:
        return len(self._images)

    def __repr__(self) -> str:
        return f"MuAssignment({self._images!r})"


def canonical_assignment(s: TermSystem) -> MuAssignment:
    """``mu(x) = j(o(x)) + Σ_a (a × x_a)``, the sum right-nested in alphabet order"""
    images = {}
    for x in s.nonterminals:
        steps = [Prod(Letter(a), s.deriv[x, a]) for a in s.alphabet]
        images[x] = Sum(Const(s.output[x]), sum_of(steps, s.semiring))
    return MuAssignment(images)


def close(
    t: Term, assignment: Mapping[str, Term], bound: FrozenSet[str] = frozenset()
) -> Term:
    """Closure of ``t``: bind every free variable ``x`` as ``μx.`` of its image

    Variables already bound on the current path are left alone, which makes the
    closure deterministic.

    Raises :class:`UnknownVariable` if a free variable has no image
    """
    if isinstance(t, Var):
        if t.name in bound:
            return t
        if t.name not in assignment:
            raise UnknownVariable(t.name)
        return Mu(t.name, close(assignment[t.name], assignment, bound | {t.name}))
    if isinstance(t, Mu):
        return Mu(t.var, close(t.body, assignment, bound | {t.var}))
    if isinstance(t, Sum):
        return Sum(close(t.left, assignment, bound), close(t.right, assignment, bound))
    if isinstance(t, Prod):
        return Prod(close(t.left, assignment, bound), close(t.right, assignment, bound))
    return t


def _base_name(name: str) -> str:
    return name.split("~", 1)[0]


def alpha_unique(e: Term) -> Term:
    """Rename binders so that no variable is bound twice

    The first binder of each name keeps it; later ones become ``x~1``, ``x~2``,
    ... in left-to-right order.
    """
    taken = {node.var for node in binders(e)} | variables(e)
    seen: Set[str] = set()
    counters: Dict[str, int] = {}

    def fresh(name: str) -> str:
        if name not in seen:
            seen.add(name)
            return name
        base = _base_name(name)
        n = counters.get(base, 0)
        while True:
            n += 1
            candidate = f"{base}~{n}"
            if candidate not in taken and candidate not in seen:
                break
        counters[base] = n
        seen.add(candidate)
        return candidate

    def walk(node: Term, env: Dict[str, str]) -> Term:
        if isinstance(node, Var):
            return Var(env.get(node.name, node.name))
        if isinstance(node, Mu):
            new = fresh(node.var)
            return Mu(new, walk(node.body, {**env, node.var: new}))
        if isinstance(node, Sum):
            return Sum(walk(node.left, env), walk(node.right, env))
        if isinstance(node, Prod):
            return Prod(walk(node.left, env), walk(node.right, env))
        return node

    return walk(e, {})


def mu_prune(e: Term) -> Term:
    """Collapse every ``μx.g`` to ``x``"""
    if isinstance(e, Mu):
        return Var(e.var)
    if isinstance(e, Sum):
        return Sum(mu_prune(e.left), mu_prune(e.right))
    if isinstance(e, Prod):
        return Prod(mu_prune(e.left), mu_prune(e.right))
    return e


def _guarded_output(g: Term, semiring: Semiring) -> Value:
    if isinstance(g, Const):
        return semiring.coerce(g.value)
    if isinstance(g, Sum):
        return semiring.add(_guarded_output(g.left, semiring), _guarded_output(g.right, semiring))
    if isinstance(g, Prod) and isinstance(g.left, Letter):
        return semiring.zero
    raise Unguarded(g)


def _guarded_derivative(g: Term, a: LetterName, semiring: Semiring) -> Term:
    zero = Const(semiring.zero)
    if isinstance(g, Const):
        return zero
    if isinstance(g, Sum):
        left = _guarded_derivative(g.left, a, semiring)
        right = _guarded_derivative(g.right, a, semiring)
        if left == zero:
            return right
        if right == zero:
            return left
        return Sum(left, right)
    if isinstance(g, Prod) and isinstance(g.left, Letter):
        return g.right if g.left.name == a else zero
    raise Unguarded(g)


def deconstruct(
    e: Term, alphabet: Alphabet, semiring: Semiring = BOOLEAN
) -> Tuple[TermSystem, Term]:
    """Term system and start term equivalent to a closed α-unique expression

    Each bound variable ``x`` of ``μx.u`` becomes a nonterminal, read off from
    the pruned body ``mp(u)``: constants give outputs and ``b × v`` gives ``v``
    as derivative by ``b``. Zero summands of derivatives are dropped. The start
    term is ``mp(e)``.

    Raises :class:`DuplicateBinder` if a variable is bound twice (use
    :func:`alpha_unique` first)
    """
    validate(e)
    pruned: Dict[str, Term] = {}
    for node in binders(e):
        if node.var in pruned:
            raise DuplicateBinder(node.var)
        pruned[node.var] = mu_prune(node.body)
    output = {x: _guarded_output(g, semiring) for x, g in pruned.items()}
    deriv = {
        (x, a): _guarded_derivative(g, a, semiring)
        for x, g in pruned.items()
        for a in alphabet
    }
    logger.debug("Deconstructed expression into %d equations", len(pruned))
    return TermSystem(alphabet, list(pruned), output, deriv, semiring), mu_prune(e)


def star(
    t: Term,
    alphabet: Alphabet,
    semiring: Semiring = BOOLEAN,
    var: Optional[str] = None,
) -> Term:
    """Kleene star of a closed expression: ``μs.(1 + Σ_a (a × (t_a × s)))``"""
    validate(t)
    if var is None:
        taken = variables(t) | set(alphabet)
        var = "s"
        n = 0
        while var in taken:
            n += 1
            var = f"s{n}"
    steps = [
        Prod(Letter(a), Prod(simplify(_derivative(t, a, semiring), semiring), Var(var)))
        for a in alphabet
    ]
    return Mu(var, Sum(Const(semiring.one), sum_of(steps, semiring)))
