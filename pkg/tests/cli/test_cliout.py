from typing import List, Tuple

import pytest

from langkit.cfl.cli.cliout import format_report, format_series, format_support, format_word
from langkit.cfl.grammar import Alphabet
from langkit.cfl.powerset_ext import LawViolation, SemiringReport
from langkit.cfl.semiring import BOOLEAN, NATURAL, Semiring

AB = Alphabet(["a", "b"])


@pytest.mark.parametrize(
    "word, alphabet, expected",
    [
        ((), AB, "_"),
        (("a", "b", "b"), AB, "abb"),
        (("ab", "c"), Alphabet(["ab", "c"]), "ab/c"),
    ],
)
def test_format_word(word: Tuple[str, ...], alphabet: Alphabet, expected: str):
    assert format_word(word, alphabet) == expected


@pytest.mark.parametrize(
    "entries, semiring, sep, expected",
    [
        ([((), True), (("a", "b"), True)], BOOLEAN, "\n", "_ 1\nab 1"),
        ([(("a",), 2), (("a", "a"), 5)], NATURAL, ", ", "a 2, aa 5"),
        ([], BOOLEAN, "\n", ""),
    ],
)
def test_format_series(entries: List[tuple], semiring: Semiring, sep: str, expected: str):
    assert format_series(entries, AB, semiring, sep=sep) == expected


@pytest.mark.parametrize(
    "entries, semiring, expected",
    [
        pytest.param([((), True), (("a", "b"), True)], BOOLEAN, "_ ab", id="language"),
        pytest.param([((), 1), (("a",), 1), (("a", "a"), 2)], NATURAL, "1 1 2", id="coefficients"),
    ],
)
def test_format_support(entries: List[tuple], semiring: Semiring, expected: str):
    assert format_support(entries, AB, semiring) == expected


def test_format_report():
    report = SemiringReport(seed=3, samples=10, checks={"idempotence": 10})
    assert format_report(report) == "idempotence: 10 checks, ok\nseed 3: all laws hold"

    report.violations.append(LawViolation("idempotence", (1,), 1, 2))
    assert format_report(report, sep="; ") == (
        "idempotence: 10 checks, FAILED (1); counterexample idempotence: 1; seed 3: 1 violations"
    )
