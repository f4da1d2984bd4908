import argparse
import itertools
import logging
import sys
from typing import List, Optional

from ..document import Document
from ..equivalence import DEFAULT_NODE_BUDGET, bisim_upto, word_equiv
from ..powerset_ext import check_semiring_agreement
from .actions import EXIT_ERROR, ActionParser
from .cliargs import (
    INPUT_EPILOG,
    SEP_EPILOG,
    WORD_EPILOG,
    add_input_args,
    add_sep_arg,
    input_name,
    load_input,
    load_word,
    nonnegative_int,
    semiring_name,
)
from .cliout import format_report, format_series, format_support

DEFAULT_MAXLEN = 6
DEFAULT_WORD_BOUND = 8
DEMOS = ("anbn", "anbmam+n", "catalan")


def _load(parser: argparse.ArgumentParser, args: argparse.Namespace) -> Document:
    return load_input(parser, input_name(parser, args), args.semiring, args.start)


def derive_action(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    doc = _load(parser, args)
    word = load_word(parser, args.word, doc)
    print(doc.derivative_text(word))
    return 0


def member_action(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    doc = _load(parser, args)
    word = load_word(parser, args.word, doc)
    print(doc.semiring.format(doc.coefficient(word)))
    return 0


def series_action(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    doc = _load(parser, args)
    print(format_series(doc.series(args.maxlen), doc.alphabet, doc.semiring, sep=args.sep))
    return 0


def translate_action(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    doc = _load(parser, args)
    source = getattr(args, "from")
    if source is not None and source != doc.kind:
        parser.error(f"Input is a {doc.kind} document, not {source}")
    print(doc.translate(args.to).format(), end="")
    return 0


def equiv_action(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    first = load_input(parser, args.input1, args.semiring)
    second = load_input(parser, args.input2, args.semiring)
    if args.mode == "word":
        bound = DEFAULT_WORD_BOUND if args.bound is None else args.bound
        result = word_equiv(first.state(), second.state(), bound)
    else:
        bound = DEFAULT_NODE_BUDGET if args.bound is None else args.bound
        result = bisim_upto(first.state(), second.state(), bound)
    print(result)
    return result.exit_code


def check_semiring_action(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    doc = _load(parser, args)
    report = check_semiring_agreement(doc.weak_system(), samples=args.samples, seed=args.seed)
    print(format_report(report, sep=args.sep))
    return 0 if report.ok else 1


def demo_action(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    doc = Document.from_resource(args.name)
    entries = list(itertools.islice(doc.iter_series(), args.n))
    print(format_support(entries, doc.alphabet, doc.semiring, sep=args.sep))
    return 0


def get_parser() -> argparse.ArgumentParser:
    parser = ActionParser(
        description="Derivatives, membership and equivalence for context-free languages "
        "and algebraic power series",
        fromfile_prefix_chars="@",
    )
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="log progress on stderr (twice for debugging output)",
    )

    derive = parser.add_action(
        "derive",
        derive_action,
        help="compute the derivative of the start element by a word",
        description="Print the derivative of the input's start element by a word",
        epilog=INPUT_EPILOG + WORD_EPILOG,
    )
    add_input_args(derive)
    derive.add_argument("--word", required=True, help="word to derive by (see WORDS)")

    member = parser.add_action(
        "member",
        member_action,
        help="compute the coefficient of a word",
        description="Print the coefficient of a word in the input's series "
        "(1 or 0 for membership in a language)",
        epilog=INPUT_EPILOG + WORD_EPILOG,
    )
    add_input_args(member)
    member.add_argument("--word", required=True, help="word to look up (see WORDS)")

    series = parser.add_action(
        "series",
        series_action,
        help="list the words with nonzero coefficient",
        description="List the words of bounded length with a nonzero coefficient, "
        "followed by the coefficient",
        epilog=INPUT_EPILOG + SEP_EPILOG,
    )
    add_input_args(series)
    add_sep_arg(series)
    series.add_argument(
        "--maxlen",
        type=nonnegative_int,
        default=DEFAULT_MAXLEN,
        help=f"maximum word length (default {DEFAULT_MAXLEN})",
    )

    translate = parser.add_action(
        "translate",
        translate_action,
        help="translate between grammars, term systems and μ-expressions",
        description="Print an equivalent document of another kind",
        epilog=INPUT_EPILOG,
    )
    add_input_args(translate)
    translate.add_argument(
        "--to", required=True, choices=Document.known_types(), help="target kind"
    )
    translate.add_argument(
        "--from",
        default=None,
        choices=Document.known_types(),
        help="expected kind of the input",
    )

    equiv = parser.add_action(
        "equiv",
        equiv_action,
        help="compare the series of two inputs",
        description="Compare the series of the start elements of two inputs. "
        "Exit status: 0 if equivalent, 1 if a witness was found, 2 if undecided, 3 on errors",
        epilog=INPUT_EPILOG,
    )
    equiv.add_argument("input1", help="first input (see INPUTS)")
    equiv.add_argument("input2", help="second input (see INPUTS)")
    equiv.add_argument(
        "--semiring",
        type=semiring_name,
        default=None,
        help="coefficient semiring overriding the inputs'",
    )
    equiv.add_argument(
        "--mode",
        choices=("word", "bisim"),
        default="word",
        help="compare words up to a length, or search for a bisimulation up to sums",
    )
    equiv.add_argument(
        "--bound",
        type=nonnegative_int,
        default=None,
        help=f"maximum word length for word mode (default {DEFAULT_WORD_BOUND}), "
        f"maximum number of pairs for bisim mode (default {DEFAULT_NODE_BUDGET})",
    )

    check = parser.add_action(
        "check-semiring",
        check_semiring_action,
        help="check the semiring laws of behaviour pairs on random samples",
        description="Check the idempotent semiring laws of behaviour pairs and the "
        "agreement of the fold with the weak GNF derivatives, on random samples "
        "built from the input grammar",
        epilog=INPUT_EPILOG + SEP_EPILOG,
    )
    add_input_args(check, default="anbmam+n")
    add_sep_arg(check)
    check.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    check.add_argument(
        "--samples",
        type=nonnegative_int,
        default=1000,
        help="number of samples per law (default 1000)",
    )

    demo = parser.add_action(
        "demo",
        demo_action,
        help="show the first entries of a packaged example",
        description="Print the first words of a packaged language, or the first "
        "coefficients of a packaged weighted series",
        epilog=SEP_EPILOG,
    )
    demo.add_argument("name", choices=DEMOS, help="example name")
    demo.add_argument(
        "--n", type=nonnegative_int, default=10, help="number of entries (default 10)"
    )
    add_sep_arg(demo, default=" ")

    return parser


def _setup_logging(verbosity: int):
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity > 1:
        level = logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(name)s: %(message)s")


def main(sys_args: Optional[List[str]] = None):
    parser = get_parser()
    args = parser.parse_args(sys_args)
    if args.action is None:
        parser.error("Please specify an action")
    _setup_logging(args.verbose)
    try:
        status = args.action(parser, args)
    except ValueError as e:
        print(f"{parser.prog}: error: {e}", file=sys.stderr)
        status = EXIT_ERROR
    except RecursionError:
        print(f"{parser.prog}: error: input too deeply nested", file=sys.stderr)
        status = EXIT_ERROR
    sys.exit(status)


if __name__ == "__main__":
    main()
