from contextlib import nullcontext
from typing import Callable, Optional, Tuple, TypeVar, Union

import pytest

from langkit.cfl.cli.cliargs import escaped_str, nonnegative_int, parse_word, semiring_name
from langkit.cfl.grammar import Alphabet
from langkit.cfl.semiring import BOOLEAN, NATURAL, Semiring

T = TypeVar("T")
U = TypeVar("U")

AB = Alphabet(["a", "b"])
LONG = Alphabet(["ab", "c"])


def parsing_test(
    arg: str,
    expected: Union[T, str, None],
    parsing_func: Callable[[str], U],
    convert_expected: Optional[Callable[[T], U]] = None,
    default_error: Optional[str] = None,
):
    context = nullcontext()
    if expected is None:
        context = pytest.raises(ValueError, match=default_error)
    elif isinstance(expected, str):
        context = pytest.raises(ValueError, match=expected)
    elif convert_expected is not None:
        expected = convert_expected(expected)
    with context:
        assert parsing_func(arg) == expected


@pytest.mark.parametrize(
    "arg, alphabet, expected",
    [
        ("", AB, ()),
        ("_", AB, ()),
        ("aab", AB, ("a", "a", "b")),
        ("a/b/a", AB, ("a", "b", "a")),
        ("abc", AB, "^Unknown letter 'c'"),
        ("ab/c/ab", LONG, ("ab", "c", "ab")),
        ("abc", LONG, "^Unknown letter 'abc'"),
    ],
)
def test_parse_word(arg: str, alphabet: Alphabet, expected: Union[Tuple[str, ...], str]):
    parsing_test(arg, expected, lambda text: parse_word(text, alphabet))


@pytest.mark.parametrize(
    "arg, expected",
    [
        ("0", 0),
        ("12", 12),
        ("-1", "^-1 is negative"),
        ("foo", "^invalid literal for int"),
    ],
)
def test_nonnegative_int(arg: str, expected: Union[int, str]):
    parsing_test(arg, expected, nonnegative_int)


@pytest.mark.parametrize(
    "arg, expected",
    [
        ("bool", BOOLEAN),
        ("nat", NATURAL),
        ("real", "^Unknown semiring 'real'"),
    ],
)
def test_semiring_name(arg: str, expected: Union[Semiring, str]):
    parsing_test(arg, expected, semiring_name)


@pytest.mark.parametrize(
    "arg, expected",
    [
        ("", ""),
        ("!", "!"),
        ("hello", "hello"),
        ("a\\nb", "a\nb"),
        ("\\0\\a\\b\\f\\n\\r\\t\\v\\117\\x4b\\\\", "\0\a\b\f\n\r\t\vOK\\"),
        ("\\x\\a", "\\x\a"),
        ("\\1", "\\1"),
    ],
)
def test_escaped_str(arg: str, expected: str):
    assert escaped_str(arg) == expected
