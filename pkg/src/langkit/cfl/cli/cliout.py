from typing import Iterable, Tuple

from ..grammar import Alphabet, Word
from ..powerset_ext import SemiringReport
from ..semiring import Semiring, Value


def format_word(word: Word, alphabet: Alphabet) -> str:
    """Print a word the way :func:`~.cliargs.parse_word` reads it

    >>> format_word(("a", "b"), Alphabet(["a", "b"]))
    'ab'
    >>> format_word((), Alphabet(["a", "b"]))
    '_'
    """
    if not word:
        return "_"
    if any(len(a) > 1 for a in alphabet):
        return "/".join(word)
    return "".join(word)


def format_series(
    entries: Iterable[Tuple[Word, Value]],
    alphabet: Alphabet,
    semiring: Semiring,
    sep: str = "\n",
) -> str:
    return sep.join(
        f"{format_word(word, alphabet)} {semiring.format(value)}" for word, value in entries
    )


def format_support(
    entries: Iterable[Tuple[Word, Value]],
    alphabet: Alphabet,
    semiring: Semiring,
    sep: str = " ",
) -> str:
    """Words of a language, or coefficients of a weighted series"""
    if semiring.idempotent:
        return sep.join(format_word(word, alphabet) for word, _ in entries)
    return sep.join(semiring.format(value) for _, value in entries)


def format_report(report: SemiringReport, sep: str = "\n") -> str:
    status = "all laws hold" if report.ok else f"{len(report.violations)} violations"
    return sep.join(report.lines() + [f"seed {report.seed}: {status}"])
