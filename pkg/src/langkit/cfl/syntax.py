"""Text format for grammars, term systems and μ-expressions

A document starts with a header line (``#grammar``, ``#terms`` or ``#mu``),
followed by ``key: value`` lines (``semiring``, ``alphabet``, ``start``) and a
body. Anything after ``%`` on a line is a comment.

Grammar bodies are productions or equations::

    #grammar
    semiring: bool
    alphabet: a b
    x -> _ | a x z | b y z
    y -> _ | b y z
    z -> a

Term systems use equations with term right-hand sides, μ-expression documents
hold a single expression::

    #mu
    semiring: bool
    alphabet: a b
    mu x . (1 + (a * (x * b)))

In terms, ``*`` binds tighter than ``+`` and both associate to the right.
Printed terms are fully parenthesized, apart from the outermost operator.
"""

import re
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Tuple

from .grammar import (
    Alphabet,
    CFGrammar,
    GrammarSystem,
    Nonterminal,
    NonBooleanSemiring,
    NotGNF,
    grammar_to_coalgebra,
)
from .muexpr import Mu, star
from .polynomial import Polynomial, _Accumulator
from .semiring import BOOLEAN, Semiring, Value
from .terms import Const, Letter, Prod, Sum, Term, TermSystem, Var

KINDS = ("grammar", "terms", "mu")
EPSILON = "_"
MU = "mu"


class ParseError(ValueError):
    """Syntax error at a given position (1-based line and column)"""

    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.message = message


_TOKEN_RE = re.compile(
    r"""
    (?P<space>\s+)
    |(?P<num>\#?\d+)
    |(?P<name>[A-Za-z_][A-Za-z0-9_]*(?:~\d+)?\^?)
    |(?P<arrow>->)
    |(?P<op>[+*().|=])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int

    def is_op(self, text: str) -> bool:
        return self.kind in ("op", "arrow") and self.text == text


def tokenize(text: str, line: int = 1, column: int = 1) -> List[Token]:
    """Split one line of text into tokens

    >>> [t.text for t in tokenize("x.a = #2 (a * x~1)")]
    ['x', '.', 'a', '=', '#2', '(', 'a', '*', 'x~1', ')']
    """
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(line, column + pos, f"unexpected character {text[pos]!r}")
        if m.lastgroup != "space":
            tokens.append(Token(m.lastgroup, m.group(), line, column + pos))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens: List[Token], end: Tuple[int, int]):
        self.tokens = tokens
        self.pos = 0
        self.end = end

    def peek(self, offset: int = 0) -> Optional[Token]:
        index = self.pos + offset
        return self.tokens[index] if index < len(self.tokens) else None

    def error(self, message: str, token: Optional[Token] = None) -> ParseError:
        if token is None:
            token = self.peek()
        if token is None:
            return ParseError(*self.end, message)
        return ParseError(token.line, token.column, message)

    def next(self, what: str = "token") -> Token:
        token = self.peek()
        if token is None:
            raise self.error(f"expected {what}, found end of input")
        self.pos += 1
        return token

    def expect_op(self, text: str) -> Token:
        token = self.next(repr(text))
        if not token.is_op(text):
            raise self.error(f"expected {text!r}, found {token.text!r}", token)
        return token

    def expect_name(self) -> Token:
        token = self.next("a name")
        if token.kind != "name" or token.text == EPSILON:
            raise self.error(f"expected a name, found {token.text!r}", token)
        return token

    def at_end(self) -> bool:
        return self.peek() is None

    def finish(self):
        if not self.at_end():
            raise self.error(f"unexpected {self.peek().text!r}")


class _TermParser(_Parser):
    def __init__(
        self,
        tokens: List[Token],
        end: Tuple[int, int],
        semiring: Semiring,
        alphabet: Optional[Alphabet],
        allow_mu: bool,
    ):
        super().__init__(tokens, end)
        self.semiring = semiring
        self.alphabet = alphabet
        self.allow_mu = allow_mu

    def starts_atom(self, token: Optional[Token]) -> bool:
        if token is None:
            return False
        return token.kind in ("num", "name") or token.is_op("(")

    def expr(self) -> Term:
        left = self.product()
        if self.peek() is not None and self.peek().is_op("+"):
            self.pos += 1
            return Sum(left, self.expr())
        return left

    def product(self) -> Term:
        left = self.postfix()
        token = self.peek()
        if token is not None and token.is_op("*") and self.starts_atom(self.peek(1)):
            self.pos += 1
            return Prod(left, self.product())
        return left

    def postfix(self) -> Term:
        term = self.primary()
        while True:
            token = self.peek()
            if token is None or not token.is_op("*") or self.starts_atom(self.peek(1)):
                return term
            self.pos += 1
            term = self.kleene(term, token)

    def kleene(self, term: Term, token: Token) -> Term:
        if not self.allow_mu or self.alphabet is None:
            raise self.error("Kleene star is only allowed in μ-expressions", token)
        try:
            return star(term, self.alphabet, self.semiring)
        except ValueError as e:
            raise self.error(f"cannot take the star: {e}", token) from e

    def primary(self) -> Term:
        token = self.next("a term")
        if token.kind == "num":
            return Const(self.value(token))
        if token.is_op("("):
            term = self.expr()
            self.expect_op(")")
            return term
        if token.kind == "name" and token.text == MU:
            if not self.allow_mu:
                raise self.error("μ-binders are only allowed in μ-expressions", token)
            var = self.expect_name().text
            self.expect_op(".")
            return Mu(var, self.primary())
        if token.kind == "name" and token.text != EPSILON:
            if self.alphabet is not None and token.text in self.alphabet:
                return Letter(token.text)
            return Var(token.text)
        raise self.error(f"unexpected {token.text!r}", token)

    def value(self, token: Token) -> Value:
        try:
            return self.semiring.parse(token.text)
        except ValueError as e:
            raise self.error(str(e), token) from e


def _end_of(text: str, line: int, column: int) -> Tuple[int, int]:
    return (line, column + len(text.rstrip()))


def parse_term(
    text: str,
    alphabet: Optional[Alphabet] = None,
    semiring: Semiring = BOOLEAN,
    allow_mu: bool = False,
    line: int = 1,
    column: int = 1,
) -> Term:
    """Parse a term; names in ``alphabet`` are letters, other names variables

    >>> parse_term("1 + a * x", Alphabet(["a"]))
    Sum(Const(True), Prod(Letter('a'), Var('x')))
    """
    parser = _TermParser(
        tokenize(text, line, column), _end_of(text, line, column), semiring, alphabet, allow_mu
    )
    if parser.at_end():
        raise parser.error("expected a term, found end of input")
    term = parser.expr()
    parser.finish()
    return term


def parse_mu(
    text: str,
    alphabet: Alphabet,
    semiring: Semiring = BOOLEAN,
    line: int = 1,
    column: int = 1,
) -> Term:
    """Parse a μ-expression, expanding postfix ``*`` into its μ-binder form"""
    return parse_term(text, alphabet, semiring, allow_mu=True, line=line, column=column)


def _parse_value(parser: _Parser, token: Token, semiring: Semiring) -> Value:
    try:
        return semiring.parse(token.text)
    except ValueError as e:
        raise parser.error(str(e), token) from e


def _monomial(parser: _Parser, semiring: Semiring) -> Tuple[Tuple[str, ...], Value]:
    coeff = semiring.one
    token = parser.peek()
    if token is not None and token.kind == "num":
        parser.pos += 1
        coeff = _parse_value(parser, token, semiring)
        token = parser.peek()
        # a lone coefficient multiplies the empty word
        if token is None or token.is_op("+"):
            return (), coeff
        if token.is_op("*"):
            parser.pos += 1
            token = parser.peek()
    if token is not None and token.kind == "name" and token.text == EPSILON:
        parser.pos += 1
        return (), coeff
    word = []
    while parser.peek() is not None and parser.peek().kind == "name":
        word.append(parser.expect_name().text)
    if not word:
        raise parser.error("expected a monomial")
    return tuple(word), coeff


def parse_polynomial(
    text: str, semiring: Semiring = BOOLEAN, line: int = 1, column: int = 1
) -> Polynomial:
    """Parse a polynomial over nonterminals

    Monomials are separated by ``+``; each is an optional coefficient, written
    ``k*`` or ``k``, followed by nonterminals, ``_`` being the empty word.

    >>> from .semiring import NATURAL
    >>> parse_polynomial("x x + #2 _", NATURAL).coefficient(())
    2
    >>> parse_polynomial("2*x x + 1*y", NATURAL).coefficient(("x", "x"))
    2
    """
    parser = _Parser(tokenize(text, line, column), _end_of(text, line, column))
    if parser.at_end():
        raise parser.error("expected a polynomial")
    acc = _Accumulator(semiring)
    while True:
        acc.add(*_monomial(parser, semiring))
        if parser.at_end():
            return acc.result()
        parser.expect_op("+")


def parse_body(
    text: str, line: int = 1, column: int = 1
) -> List[Tuple[str, ...]]:
    """Parse the right-hand side of a production: bodies separated by ``|``

    An empty right-hand side declares a nonterminal without productions.

    >>> parse_body("_ | a x z")
    [(), ('a', 'x', 'z')]
    """
    parser = _Parser(tokenize(text, line, column), _end_of(text, line, column))
    bodies: List[Tuple[str, ...]] = []
    if parser.at_end():
        return bodies
    while True:
        token = parser.peek()
        if token is not None and token.kind == "name" and token.text == EPSILON:
            parser.pos += 1
            bodies.append(())
        else:
            body = []
            while parser.peek() is not None and parser.peek().kind == "name":
                body.append(parser.expect_name().text)
            if not body:
                raise parser.error("expected a production body")
            bodies.append(tuple(body))
        if parser.at_end():
            return bodies
        parser.expect_op("|")


@dataclass
class Equation:
    """``x.out = ...`` or ``x.a = ...`` line, right-hand side left unparsed"""

    head: str
    field: str
    rhs: str
    line: int
    column: int


@dataclass
class ParsedDocument:
    """Raw contents of a document, before its elements are interpreted"""

    kind: str
    semiring: Semiring = BOOLEAN
    alphabet: Optional[Alphabet] = None
    start: Optional[Tuple[str, int, int]] = None
    productions: Dict[str, List[Tuple[str, ...]]] = field(default_factory=dict)
    equations: List[Equation] = field(default_factory=list)
    expression: Optional[Tuple[str, int, int]] = None


_HEADER_RE = re.compile(r"#(\w+)\s*$")
_KEY_RE = re.compile(r"(semiring|alphabet|start)\s*:(.*)$")
_PRODUCTION_RE = re.compile(r"([^\s.]+)\s*->(.*)$")
_EQUATION_RE = re.compile(r"([^\s.]+)\.(\w+)\s*=(.*)$")


def _strip_comment(line: str) -> str:
    return line.split("%", 1)[0].rstrip()


def read_document(text: str) -> ParsedDocument:
    """Split a document into header, keys and body lines

    Raises :class:`ParseError` on malformed lines
    """
    doc: Optional[ParsedDocument] = None
    expression_lines: List[Tuple[str, int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        stripped = line.lstrip()
        if not stripped:
            continue
        column = len(line) - len(stripped) + 1
        if doc is None:
            m = _HEADER_RE.match(stripped)
            if m is None or m.group(1) not in KINDS:
                raise ParseError(
                    lineno, column, "expected a header line (#grammar, #terms or #mu)"
                )
            doc = ParsedDocument(kind=m.group(1))
            continue

        m = _KEY_RE.match(stripped)
        if m is not None:
            key, value = m.group(1), m.group(2)
            vcol = column + m.start(2)
            if doc.productions or doc.equations or expression_lines:
                raise ParseError(lineno, column, f"{key!r} must come before the body")
            if key == "semiring":
                try:
                    doc.semiring = Semiring.from_name(value.strip())
                except ValueError as e:
                    raise ParseError(lineno, vcol, str(e)) from e
            elif key == "alphabet":
                try:
                    doc.alphabet = Alphabet(value.split())
                except ValueError as e:
                    raise ParseError(lineno, vcol, str(e)) from e
            else:
                doc.start = (value, lineno, vcol)
            continue

        if doc.kind == "mu":
            expression_lines.append((line, lineno, 1))
            continue

        m = _PRODUCTION_RE.match(stripped)
        if m is not None and doc.kind == "grammar":
            if doc.equations:
                raise ParseError(lineno, column, "cannot mix productions and equations")
            head = m.group(1)
            bodies = parse_body(m.group(2), lineno, column + m.start(2))
            doc.productions.setdefault(head, []).extend(bodies)
            continue

        m = _EQUATION_RE.match(stripped)
        if m is not None:
            if doc.productions:
                raise ParseError(lineno, column, "cannot mix productions and equations")
            doc.equations.append(
                Equation(m.group(1), m.group(2), m.group(3), lineno, column + m.start(3))
            )
            continue

        raise ParseError(lineno, column, "cannot parse line")

    if doc is None:
        raise ParseError(1, 1, "empty document")
    if doc.alphabet is None:
        raise ParseError(1, 1, "missing alphabet")
    if doc.kind == "mu":
        if not expression_lines:
            raise ParseError(1, 1, "missing expression")
        # continuation lines are joined; positions refer to the first line
        text, lineno, column = expression_lines[0]
        joined = " ".join(line for line, _, _ in expression_lines)
        doc.expression = (joined if len(expression_lines) > 1 else text, lineno, column)
    return doc


def _equation_heads(equations: Iterable[Equation]) -> List[str]:
    heads: List[str] = []
    for eq in equations:
        if eq.head not in heads:
            heads.append(eq.head)
    return heads


def _check_field(eq: Equation, alphabet: Alphabet):
    if eq.field != "out" and eq.field not in alphabet:
        raise ParseError(eq.line, eq.column, f"unknown letter {eq.field!r}")


def _parse_output(eq: Equation, semiring: Semiring) -> Value:
    text = eq.rhs.strip()
    try:
        return semiring.parse(text)
    except ValueError as e:
        raise ParseError(eq.line, eq.column, str(e)) from e


def build_grammar(doc: ParsedDocument) -> Tuple[Optional[CFGrammar], Optional[GrammarSystem]]:
    """Grammar (for productions) and grammar system (when in strict GNF) of a document"""
    if doc.productions:
        if doc.semiring != BOOLEAN:
            raise NonBooleanSemiring(doc.semiring)
        strict = CFGrammar(doc.alphabet, doc.productions)
        try:
            return strict, grammar_to_coalgebra(strict)
        except NotGNF:
            return CFGrammar(doc.alphabet, doc.productions, weak=True), None

    K = doc.semiring
    heads = _equation_heads(doc.equations)
    output: Dict[Nonterminal, Value] = {}
    deriv = {}
    for eq in doc.equations:
        _check_field(eq, doc.alphabet)
        if eq.field == "out":
            output[eq.head] = _parse_output(eq, K)
        else:
            deriv[eq.head, eq.field] = parse_polynomial(eq.rhs, K, eq.line, eq.column)
    return None, GrammarSystem(doc.alphabet, heads, output, deriv, K)


def build_terms(doc: ParsedDocument) -> TermSystem:
    K = doc.semiring
    output: Dict[str, Value] = {}
    deriv = {}
    for eq in doc.equations:
        _check_field(eq, doc.alphabet)
        if eq.field == "out":
            output[eq.head] = _parse_output(eq, K)
        else:
            deriv[eq.head, eq.field] = parse_term(eq.rhs, doc.alphabet, K, line=eq.line, column=eq.column)
    return TermSystem(doc.alphabet, _equation_heads(doc.equations), output, deriv, K)


def format_value(value: Value) -> str:
    """Constant as written in terms: ``0``, ``1`` or ``#k``

    >>> [format_value(v) for v in (True, 0, 1, 7)]
    ['1', '0', '1', '#7']
    """
    n = int(value)
    return str(n) if n in (0, 1) else f"#{n}"


def _format_node(t: Term, top: bool) -> str:
    if isinstance(t, (Sum, Prod)):
        op = "+" if isinstance(t, Sum) else "*"
        text = f"{_format_node(t.left, False)} {op} {_format_node(t.right, False)}"
        return text if top else f"({text})"
    if isinstance(t, Mu):
        return f"{MU} {t.var} . {_format_node(t.body, False)}"
    if isinstance(t, Const):
        return format_value(t.value)
    if isinstance(t, (Letter, Var)):
        return t.name
    raise TypeError(f"Not a term: {t!r}")


def format_term(t: Term) -> str:
    """Print a term, parenthesizing every operand that is a sum or a product

    >>> format_term(Sum(Const(True), Prod(Letter("a"), Prod(Var("x"), Letter("b")))))
    '1 + (a * (x * b))'
    """
    return _format_node(t, True)


def format_polynomial(
    p: Polynomial, key: Optional[Callable[[object], object]] = None
) -> str:
    """Print a polynomial in length-lexicographic order, ``0`` if it is zero

    >>> format_polynomial(Polynomial.from_words([("y",), (), ("x", "x")]))
    '_ + y + x x'
    """
    if p.is_zero():
        return "0"
    K = p.semiring
    monomials = []
    for word, coeff in p.sorted_items(key=key if key is not None else str):
        text = " ".join(str(sym) for sym in word)
        if not K.eq(coeff, K.one):
            text = f"{format_value(coeff)}*{text}" if text else format_value(coeff)
        monomials.append(text or EPSILON)
    return " + ".join(monomials)


def format_bodies(bodies: Iterable[Tuple[object, ...]]) -> str:
    return " | ".join(" ".join(str(sym) for sym in body) or EPSILON for body in bodies)


def format_header(
    kind: str, semiring: Semiring, alphabet: Alphabet, start: Optional[str] = None
) -> List[str]:
    lines = [f"#{kind}", f"semiring: {semiring.name}", f"alphabet: {alphabet}"]
    if start is not None:
        lines.append(f"start: {start}")
    return lines
