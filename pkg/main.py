import sys
import logging
import argparse
from pathlib import Path
from typing import Optional, Sequence
from functions.settings import log_level
from services.exceptions import UsageError
from handlers import commands, errors


class CommandParser(argparse.ArgumentParser):
    """Argument parser that raises UsageError instead of exiting"""
    def error(self, message: str):
        raise UsageError(f'{message}\n{self.format_usage().strip()}')


def build_parser() -> CommandParser:
    """
    Declares the command line.

    The verbs are:
    - info, omega, aut-alcove, table-a: root data and the groups Ω and Aut(𝒜).
    - kp, fund-polytope, table-b, dirichlet: polytopes inside the alcove.
    - check-fund, check-stratified: claim checks with witnesses.
    - volume: exact volumes and the identities linking them.
    - sweep: one summary row per rank of a family.

    :return: The configured parser.
    :rtype: CommandParser
    """
    parser = CommandParser(prog='alcove', description='Exact computations on alcoves and their symmetry groups.')
    parser.add_argument('verb', choices=commands.VERBS)
    parser.add_argument('family', help='family letter A-G, or a full name such as E6')
    parser.add_argument('rank', nargs='?', default=None)

    # Output
    parser.add_argument('--format', choices=commands.FORMATS, default='json')
    parser.add_argument('--out', default=None, help='write the document to a file instead of stdout')

    # Verb options
    parser.add_argument('--support', default=None, help='balanced root override PLUS:MINUS, e.g. 1:6')
    parser.add_argument('--group', default=None, help='acting group of check-fund / check-stratified')
    parser.add_argument('--scale', default='1', help='factor applied to the Gram matrix')

    # Sweep options
    parser.add_argument('--ranks', default=None, help='inclusive rank range a-b')
    parser.add_argument('--checks', default=None, help='comma separated subset of fund,strat')
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parses the arguments, runs the command and prints its document.

    :param argv: Arguments without the program name; sys.argv[1:] by default.
    :return: Process exit code.
    :rtype: int
    """
    try:
        logging.basicConfig(level=log_level(), stream=sys.stderr)
        try:
            arguments = build_parser().parse_args(argv)
        except SystemExit as exit_request:
            # --help
            return int(exit_request.code or 0)

        command = commands.Command.from_arguments(arguments)
        result = commands.command_handler(command)
        text = commands.render(result.document, command.format)
        if command.out:
            Path(command.out).write_text(text + '\n', encoding='utf-8')
            logging.info(f' Document written to {command.out}')
        else:
            sys.stdout.write(text + '\n')
        return result.exit_code
    except Exception as error:
        return errors.errors_handler(error)


def main():
    sys.exit(run())


if __name__ == '__main__':
    main()
