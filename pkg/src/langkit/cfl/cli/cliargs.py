import argparse
import re
from typing import Optional

from ..data import PRESET_PATH_ENV
from ..document import Document
from ..grammar import Alphabet, Word
from ..semiring import Semiring

EPSILON = "_"


def semiring_name(arg: str) -> Semiring:
    return Semiring.from_name(arg)


def nonnegative_int(arg: str) -> int:
    value = int(arg)
    if value < 0:
        raise ValueError(f"{value} is negative")
    return value


def parse_word(arg: str, alphabet: Alphabet) -> Word:
    """Read a word given on the command line

    ``_`` and the empty string stand for ε. Words are slash-separated when they
    contain a ``/`` or when some letter has more than one character, and read
    letter by letter otherwise.

    Raises :class:`UnknownLetter` for letters outside ``alphabet``
    """
    if arg in ("", EPSILON):
        return ()
    if "/" in arg or any(len(a) > 1 for a in alphabet):
        return alphabet.check_word(arg.split("/"))
    return alphabet.check_word(arg)


INPUT_EPILOG = f"""
INPUTS: an input is either a path to a text document, whose first line is one
of #grammar, #terms or #mu, or the name of a preset. Presets are YAML files
searched in the directories listed in ``{PRESET_PATH_ENV}``, then in the
package itself (anbn, anbmam+n, catalan, running-terms, anbn-mu)
"""

WORD_EPILOG = """
WORDS: words are written letter by letter (e.g. aabb) when all letters are
single characters, and slash-separated (e.g. ab/cd) otherwise; _ or an empty
string is the empty word
"""


def add_input_args(parser: argparse.ArgumentParser, default: Optional[str] = None):
    """Add the input, given as a positional argument or with ``--input``"""
    parser.add_argument(
        "input",
        nargs="?",
        default=default,
        help="text document or preset name (see INPUTS)",
    )
    parser.add_argument(
        "--input",
        dest="input_option",
        metavar="INPUT",
        default=None,
        help="same as the positional input",
    )
    parser.add_argument(
        "--semiring",
        type=semiring_name,
        default=None,
        help=f"coefficient semiring overriding the input's ({', '.join(Semiring.known_names())})",
    )
    parser.add_argument(
        "--start",
        default=None,
        help="start element overriding the input's, in the input's syntax",
    )


def input_name(parser: argparse.ArgumentParser, args: argparse.Namespace) -> str:
    option = getattr(args, "input_option", None)
    if option is None:
        if args.input is None:
            parser.error("An input is required")
        return args.input
    if args.input is not None and args.input != parser.get_default("input"):
        parser.error("Give the input either as a positional argument or with --input")
    return option


def load_input(
    parser: argparse.ArgumentParser,
    name: str,
    semiring: Optional[Semiring] = None,
    start: Optional[str] = None,
) -> Document:
    doc = None
    try:
        doc = Document.load(name, semiring)
        if start is not None:
            doc = doc.with_start(start)
    except (ValueError, FileNotFoundError) as e:
        parser.error(str(e))
    assert doc is not None
    return doc


def load_word(parser: argparse.ArgumentParser, arg: str, doc: Document) -> Word:
    word = None
    try:
        word = parse_word(arg, doc.alphabet)
    except ValueError as e:
        parser.error(str(e))
    assert word is not None
    return word


_ESCAPES = {
    "\\": "\\",
    "0": "\x00",
    "a": "\a",
    "b": "\b",
    "f": "\f",
    "n": "\n",
    "r": "\r",
    "t": "\t",
    "v": "\v",
}
_ESCAPE_RE = re.compile(r"\\([\\0abfnrtv]|x[0-9a-f]{2}|[0-3][0-7]{2})", re.IGNORECASE)


def _unescape(m: re.Match) -> str:
    code = m.group(1)
    if len(code) == 1:
        return _ESCAPES[code.lower()]
    if code[0] in "xX":
        return chr(int(code[1:], 16))
    return chr(int(code, 8))


def escaped_str(arg: str) -> str:
    r"""Evaluate backslash escapes

    >>> escaped_str(r"a\tb\x2c")
    'a\tb,'
    """
    return _ESCAPE_RE.sub(_unescape, arg)


SEP_EPILOG = """
SEPARATORS: separators can be any string of characters, with some escape
sequences evaluated:
* \\0, \\a, \\b, \\f, \\n, \\r, \\t, \\v: NUL, BEL, BS, FF, LF, CR, TAB, VT
* \\xhh: character with hex value hh
* \\ooo: character with octal value ooo
* \\\\: literal \\
"""


def add_sep_arg(parser: argparse.ArgumentParser, default: str = "\n"):
    parser.add_argument(
        "--sep",
        type=escaped_str,
        default=default,
        help="output separator, see SEPARATORS for special values",
    )
