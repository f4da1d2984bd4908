"""Documents: a system of one of the three kinds together with its start element

Documents are read from the text format of :mod:`langkit.cfl.syntax`, from
dictionaries (YAML presets) or from named resources, and can be translated into
each other. Every translation goes through term systems.
"""

import logging
import os.path
from abc import ABC, abstractmethod
from typing import Dict, Iterable, Iterator, List, Optional, Tuple, Type

from .data import PRESET_PATH_ENV, load_yaml
from .equivalence import GrammarState, MuState, State, TermState
from .grammar import (
    Alphabet,
    CFGrammar,
    GrammarSystem,
    LetterName,
    Nonterminal,
    UnknownNonterminal,
    Word,
    coalgebra_to_grammar,
    word_derivative,
)
from .muexpr import (
    alpha_unique,
    canonical_assignment,
    close,
    deconstruct,
    mu_word_derivative,
    validate,
)
from .polynomial import Polynomial
from .powerset_ext import WeakGNFSystem
from .semiring import BOOLEAN, Semiring, Value
from .syntax import (
    Equation,
    ParsedDocument,
    ParseError,
    build_grammar,
    build_terms,
    format_bodies,
    format_header,
    format_polynomial,
    format_term,
    format_value,
    parse_body,
    parse_mu,
    parse_polynomial,
    parse_term,
    read_document,
)
from .terms import (
    Const,
    Term,
    TermSystem,
    Var,
    induced_grammar_system,
    letters,
    polynomial_to_term,
    term_word_derivative,
    translate_f,
)

logger = logging.getLogger(__name__)


class Document(ABC):
    """A system over ``alphabet`` and ``semiring`` with a distinguished start element

    Concrete kinds register themselves with the ``doctype`` class keyword.
    """

    kind: str = ""

    def __init__(self, alphabet: Alphabet, semiring: Semiring):
        self.alphabet = alphabet
        self.semiring = semiring

    @abstractmethod
    def state(self) -> State:
        """State of the start element, for equivalence checks and series"""
        raise NotImplementedError

    @abstractmethod
    def derivative_text(self, w: Iterable[LetterName]) -> str:
        """Printed derivative of the start element by the word ``w``"""
        raise NotImplementedError

    @abstractmethod
    def with_start(self, text: str) -> "Document":
        """Same system, with the start element parsed from ``text``"""
        raise NotImplementedError

    @abstractmethod
    def start_text(self) -> Optional[str]:
        raise NotImplementedError

    @abstractmethod
    def lines(self) -> List[str]:
        """Body lines of the printed document"""
        raise NotImplementedError

    @abstractmethod
    def to_terms(self) -> "TermsDocument":
        raise NotImplementedError

    @classmethod
    @abstractmethod
    def from_terms(cls, doc: "TermsDocument") -> "Document":
        raise NotImplementedError

    @classmethod
    @abstractmethod
    def _from_parsed(cls, parsed: ParsedDocument) -> "Document":
        raise NotImplementedError

    @classmethod
    @abstractmethod
    def _from_dict(cls, doc_dict: dict, parsed: ParsedDocument) -> "Document":
        """Fill ``parsed`` from the kind-specific keys of ``doc_dict``"""
        raise NotImplementedError

    def format(self) -> str:
        header = format_header(self.kind, self.semiring, self.alphabet, self.start_text())
        return "\n".join(header + self.lines()) + "\n"

    def coefficient(self, w: Iterable[LetterName]) -> Value:
        return self.state().coefficient(self.alphabet.check_word(w))

    def series(self, maxlen: int) -> List[Tuple[Word, Value]]:
        return self.state().series(maxlen)

    def iter_series(self, maxlen: Optional[int] = None) -> Iterator[Tuple[Word, Value]]:
        return self.state().iter_series(maxlen)

    def translate(self, kind: str) -> "Document":
        """Equivalent document of another kind

        ``grammar -> terms`` reads polynomials as sums of products, ``terms ->
        grammar`` builds the induced grammar system over extended
        nonterminals, ``terms -> mu`` takes the closure of the start term and
        ``mu -> terms`` deconstructs the α-renamed expression.
        """
        if kind not in self._known_types:
            raise ValueError(f"Unknown type {kind!r}")
        if kind == self.kind:
            return self
        logger.debug("Translating %s document to %s", self.kind, kind)
        return self._known_types[kind].from_terms(self.to_terms())

    def weak_system(self) -> WeakGNFSystem:
        """Weak GNF system of the grammar this document translates to"""
        doc = self.translate("grammar")
        assert isinstance(doc, GrammarDocument)
        return doc.weak_system()

    _known_types: Dict[str, Type["Document"]] = {}

    @classmethod
    def _register_document(cls, name: str, class_: Type["Document"]):
        assert name not in cls._known_types
        cls._known_types[name] = class_

    @classmethod
    def __init_subclass__(cls, /, doctype: Optional[str] = None, **kwargs):
        super().__init_subclass__(**kwargs)
        if doctype is not None:
            cls.kind = doctype
            Document._register_document(doctype, cls)

    @classmethod
    def known_types(cls) -> List[str]:
        return list(cls._known_types)

    @classmethod
    def from_text(cls, text: str, semiring: Optional[Semiring] = None) -> "Document":
        """Parse a document, its kind given by the header line

        ``semiring`` overrides the semiring declared in the document.

        Raises :class:`ParseError` on syntax errors, and the domain errors of
        the system constructors on invalid systems
        """
        parsed = read_document(text)
        if semiring is not None:
            parsed.semiring = semiring
        return cls._known_types[parsed.kind]._from_parsed(parsed)

    @classmethod
    def from_dict(cls, doc_dict: dict, semiring: Optional[Semiring] = None) -> "Document":
        """Create a document from a dictionary

        The kind is given by the ``type`` key (``grammar``, ``terms`` or
        ``mu``). Common items are:

        * ``semiring``: semiring name, ``bool`` by default
        * ``alphabet``: list of letters
        * ``start``: start element, in the text syntax (optional)

        Grammars give ``productions`` (mapping nonterminals to lists of bodies)
        or ``output`` and ``derivatives`` (mapping nonterminals to letters to
        polynomials); term systems give ``output`` and ``derivatives`` with
        terms; μ-expression documents give an ``expression``.

        Raises :class:`ValueError` if the type is unknown or the contents are
        invalid
        """
        type_ = doc_dict.get("type")
        if type_ not in cls._known_types:
            raise ValueError(f"Unknown type {type_!r}")
        if "alphabet" not in doc_dict:
            raise ValueError("Document must provide `alphabet`")
        alphabet = doc_dict["alphabet"]
        if isinstance(alphabet, str):
            alphabet = alphabet.split()
        parsed = ParsedDocument(
            kind=type_,
            semiring=(
                semiring
                if semiring is not None
                else Semiring.from_name(doc_dict.get("semiring", BOOLEAN.name))
            ),
            alphabet=Alphabet(str(a) for a in alphabet),
        )
        if doc_dict.get("start") is not None:
            parsed.start = (str(doc_dict["start"]), 1, 1)
        return cls._known_types[type_]._from_dict(doc_dict, parsed)

    @classmethod
    def from_resource(cls, name: str, semiring: Optional[Semiring] = None) -> "Document":
        """Load a document from a YAML resource

        ``name`` should be either the name of a preset (in
        ``langkit.cfl.data.systems`` or ``LANGKIT_CFL_PRESET_PATH``, without
        the extension), or the path to a YAML file

        Raises :class:`FileNotFoundError` if no corresponding resource is found
        """
        path = name if os.path.isfile(name) else None
        doc_dict = load_yaml(f"systems/{name}.yaml", path, env_path=PRESET_PATH_ENV)
        if not isinstance(doc_dict, dict):
            raise ValueError("Invalid resource file")
        return cls.from_dict(doc_dict, semiring)

    @classmethod
    def load(cls, name: str, semiring: Optional[Semiring] = None) -> "Document":
        """Read a text document from a file, or fall back to :meth:`from_resource`"""
        if os.path.isfile(name) and not name.endswith((".yaml", ".yml")):
            logger.debug("Reading document from %r", name)
            with open(name, "r", encoding="utf-8") as f:
                return cls.from_text(f.read(), semiring)
        return cls.from_resource(name, semiring)


def _value_text(value: object) -> str:
    if isinstance(value, bool):
        return str(int(value))
    return str(value)


def _equations_from_dict(doc_dict: dict) -> List[Equation]:
    equations = []
    for head, value in (doc_dict.get("output") or {}).items():
        equations.append(Equation(str(head), "out", _value_text(value), 1, 1))
    for head, derivs in (doc_dict.get("derivatives") or {}).items():
        if not isinstance(derivs, dict):
            raise ValueError(f"Derivatives of {head!r} must be a mapping from letters")
        for letter, rhs in derivs.items():
            equations.append(Equation(str(head), str(letter), _value_text(rhs), 1, 1))
    return equations


def _equation_lines(
    names: Iterable[str], output: Dict[str, str], deriv: Dict[Tuple[str, LetterName], str]
) -> List[str]:
    """``x.out`` and ``x.a`` lines for the nonzero entries, ``x.out = 0`` if there are none"""
    lines = []
    for x in names:
        entries = []
        if x in output:
            entries.append(f"{x}.out = {output[x]}")
        entries.extend(f"{x}.{a} = {rhs}" for (y, a), rhs in deriv.items() if y == x)
        lines.extend(entries or [f"{x}.out = 0"])
    return lines


class GrammarDocument(Document, doctype="grammar"):
    """Grammar coalgebra with a start polynomial

    Documents read from productions also keep their grammar. A grammar that is
    only in weak GNF has no grammar system: it can be printed and turned into a
    weak GNF system, other operations raise :class:`NotGNF`.
    """

    def __init__(
        self,
        system: Optional[GrammarSystem],
        start: Optional[Polynomial] = None,
        grammar: Optional[CFGrammar] = None,
    ):
        if system is None and grammar is None:
            raise ValueError("A grammar document needs a system or a grammar")
        if system is not None:
            super().__init__(system.alphabet, system.semiring)
            if start is not None:
                system.check_polynomial(start)
        else:
            super().__init__(grammar.alphabet, BOOLEAN)
            if start is not None:
                for sym in start.symbols():
                    if sym not in grammar.productions:
                        raise UnknownNonterminal(sym)
        self.system = system
        self.grammar = grammar
        self.start = start

    @property
    def nonterminals(self) -> Tuple[Nonterminal, ...]:
        if self.system is not None:
            return self.system.nonterminals
        return self.grammar.nonterminals

    def require_system(self) -> GrammarSystem:
        if self.system is None:
            CFGrammar(self.alphabet, self.grammar.productions, self.grammar.nonterminals).check_gnf()
        assert self.system is not None
        return self.system

    def start_polynomial(self) -> Polynomial:
        if self.start is not None:
            return self.start
        if not self.nonterminals:
            raise ValueError("Grammar has no nonterminals and no start polynomial")
        return Polynomial.monomial((self.nonterminals[0],), semiring=self.semiring)

    def _symbol_key(self):
        rank = {x: (1, i) for i, x in enumerate(self.nonterminals)}
        rank.update((a, (0, i)) for i, a in enumerate(self.alphabet))
        return rank.__getitem__

    def state(self) -> State:
        return GrammarState(self.require_system(), self.start_polynomial())

    def derivative_text(self, w: Iterable[LetterName]) -> str:
        system = self.require_system()
        w = self.alphabet.check_word(w)
        return format_polynomial(
            word_derivative(system, self.start_polynomial(), w), key=self._symbol_key()
        )

    def with_start(self, text: str) -> "GrammarDocument":
        return GrammarDocument(self.system, parse_polynomial(text, self.semiring), self.grammar)

    def start_text(self) -> Optional[str]:
        if self.start is None:
            return None
        return format_polynomial(self.start, key=self._symbol_key())

    def lines(self) -> List[str]:
        key = self._symbol_key()
        if self.semiring == BOOLEAN:
            grammar = self.grammar if self.grammar is not None else coalgebra_to_grammar(self.system)
            return [
                f"{x} -> {format_bodies(sorted(bodies, key=lambda b: (len(b), [key(s) for s in b])))}".rstrip()
                for x, bodies in grammar.productions.items()
            ]
        system = self.require_system()
        K = self.semiring
        output = {
            str(x): format_value(system.output[x])
            for x in system.nonterminals
            if not K.is_zero(system.output[x])
        }
        deriv = {
            (str(x), a): format_polynomial(system.deriv[x, a], key=key)
            for x in system.nonterminals
            for a in self.alphabet
            if system.deriv[x, a]
        }
        return _equation_lines((str(x) for x in system.nonterminals), output, deriv)

    def weak_system(self) -> WeakGNFSystem:
        if self.grammar is not None:
            return WeakGNFSystem.from_grammar(self.grammar)
        return WeakGNFSystem.lift(self.require_system())

    def to_terms(self) -> "TermsDocument":
        system = self.require_system()
        key = system.sort_key

        def atom(x: Nonterminal) -> Term:
            return Var(str(x))

        terms = TermSystem(
            self.alphabet,
            [str(x) for x in system.nonterminals],
            {str(x): system.output[x] for x in system.nonterminals},
            {
                (str(x), a): polynomial_to_term(system.deriv[x, a], atom, key)
                for x in system.nonterminals
                for a in self.alphabet
            },
            self.semiring,
        )
        start = None if self.start is None else polynomial_to_term(self.start, atom, key)
        return TermsDocument(terms, start)

    @classmethod
    def from_terms(cls, doc: "TermsDocument") -> "GrammarDocument":
        system = induced_grammar_system(doc.system)
        return cls(system, translate_f(doc.start_term(), doc.semiring))

    @classmethod
    def _from_parsed(cls, parsed: ParsedDocument) -> "GrammarDocument":
        grammar, system = build_grammar(parsed)
        start = None
        if parsed.start is not None:
            text, line, column = parsed.start
            start = parse_polynomial(text, parsed.semiring, line, column)
        return cls(system, start, grammar)

    @classmethod
    def _from_dict(cls, doc_dict: dict, parsed: ParsedDocument) -> "GrammarDocument":
        productions = doc_dict.get("productions")
        if productions is not None:
            for head, bodies in productions.items():
                if isinstance(bodies, str):
                    bodies = [bodies]
                parsed.productions[str(head)] = [
                    body for text in bodies or [] for body in parse_body(str(text))
                ]
        else:
            parsed.equations = _equations_from_dict(doc_dict)
        return cls._from_parsed(parsed)


class TermsDocument(Document, doctype="terms"):
    """System of behavioural differential equations with a start term"""

    def __init__(self, system: TermSystem, start: Optional[Term] = None):
        super().__init__(system.alphabet, system.semiring)
        if start is not None:
            system.check_term(start)
        self.system = system
        self.start = start

    def start_term(self) -> Term:
        if self.start is not None:
            return self.start
        if not self.system.nonterminals:
            raise ValueError("Term system has no variables and no start term")
        return Var(self.system.nonterminals[0])

    def state(self) -> State:
        return TermState(self.system, self.start_term())

    def derivative_text(self, w: Iterable[LetterName]) -> str:
        w = self.alphabet.check_word(w)
        return format_term(term_word_derivative(self.system, self.start_term(), w))

    def with_start(self, text: str) -> "TermsDocument":
        return TermsDocument(self.system, parse_term(text, self.alphabet, self.semiring))

    def start_text(self) -> Optional[str]:
        return None if self.start is None else format_term(self.start)

    def lines(self) -> List[str]:
        K = self.semiring
        system = self.system
        output = {
            x: format_value(system.output[x])
            for x in system.nonterminals
            if not K.is_zero(system.output[x])
        }
        deriv = {
            (x, a): format_term(system.deriv[x, a])
            for x in system.nonterminals
            for a in self.alphabet
            if not (isinstance(system.deriv[x, a], Const) and K.is_zero(system.deriv[x, a].value))
        }
        return _equation_lines(system.nonterminals, output, deriv)

    def to_terms(self) -> "TermsDocument":
        return self

    @classmethod
    def from_terms(cls, doc: "TermsDocument") -> "TermsDocument":
        return doc

    @classmethod
    def _from_parsed(cls, parsed: ParsedDocument) -> "TermsDocument":
        system = build_terms(parsed)
        start = None
        if parsed.start is not None:
            text, line, column = parsed.start
            start = parse_term(text, parsed.alphabet, parsed.semiring, line=line, column=column)
        return cls(system, start)

    @classmethod
    def _from_dict(cls, doc_dict: dict, parsed: ParsedDocument) -> "TermsDocument":
        parsed.equations = _equations_from_dict(doc_dict)
        return cls._from_parsed(parsed)


class MuDocument(Document, doctype="mu"):
    """Closed guarded μ-expression, which is its own start element"""

    def __init__(self, expr: Term, alphabet: Alphabet, semiring: Semiring = BOOLEAN):
        super().__init__(alphabet, semiring)
        validate(expr)
        for a in letters(expr):
            alphabet.check(a)
        self.expr = expr

    def state(self) -> State:
        return MuState(self.expr, self.alphabet, self.semiring, checked=True)

    def derivative_text(self, w: Iterable[LetterName]) -> str:
        w = self.alphabet.check_word(w)
        return format_term(mu_word_derivative(self.expr, w, self.semiring))

    def with_start(self, text: str) -> "MuDocument":
        return MuDocument(parse_mu(text, self.alphabet, self.semiring), self.alphabet, self.semiring)

    def start_text(self) -> Optional[str]:
        return None

    def lines(self) -> List[str]:
        return [format_term(self.expr)]

    def to_terms(self) -> TermsDocument:
        system, start = deconstruct(alpha_unique(self.expr), self.alphabet, self.semiring)
        return TermsDocument(system, start)

    @classmethod
    def from_terms(cls, doc: TermsDocument) -> "MuDocument":
        expr = close(doc.start_term(), canonical_assignment(doc.system))
        return cls(expr, doc.alphabet, doc.semiring)

    @classmethod
    def _from_parsed(cls, parsed: ParsedDocument) -> "MuDocument":
        if parsed.start is not None:
            _, line, column = parsed.start
            raise ParseError(line, column, "μ-expression documents have no start element")
        text, line, column = parsed.expression
        expr = parse_mu(text, parsed.alphabet, parsed.semiring, line, column)
        return cls(expr, parsed.alphabet, parsed.semiring)

    @classmethod
    def _from_dict(cls, doc_dict: dict, parsed: ParsedDocument) -> "MuDocument":
        if "expression" not in doc_dict:
            raise ValueError("μ-expression document must provide `expression`")
        parsed.expression = (str(doc_dict["expression"]), 1, 1)
        return cls._from_parsed(parsed)
