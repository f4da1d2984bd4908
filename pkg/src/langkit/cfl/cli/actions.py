import argparse
import sys
from typing import Callable, NoReturn

Action = Callable[[argparse.ArgumentParser, argparse.Namespace], int]

#: Exit status for invalid arguments and failed computations, distinct from
#: the 0/1/2 outcomes of a comparison
EXIT_ERROR = 3


class CommandParser(argparse.ArgumentParser):
    """Argument parser exiting with :data:`EXIT_ERROR` on invalid arguments"""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


class ActionParser(CommandParser):
    """Argument parser dispatching to one sub-parser per action

    Each action function receives the action's parser (for error reporting)
    and the parsed arguments, and returns the exit status.
    """

    def __init__(self, **kwargs):
        super().__init__(**kwargs)

        self.set_defaults(action=None)
        self.action_subparsers = self.add_subparsers(
            title="actions",
            metavar="<action>",
            help="use `%(prog)s %(metavar)s --help` for details",
            parser_class=CommandParser,  # sub-parsers must not get sub-actions
        )

    def add_action(self, name: str, func: Action, **kwargs) -> argparse.ArgumentParser:
        kwargs.setdefault("formatter_class", argparse.RawDescriptionHelpFormatter)
        action = self.action_subparsers.add_parser(name, **kwargs)
        action.set_defaults(action=func)
        return action
