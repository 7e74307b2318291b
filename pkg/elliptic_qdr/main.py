import sys
import logging
import argparse

from elliptic_qdr import __version__
from elliptic_qdr.commands import (
    EXIT_INCONSISTENT,
    EXIT_USAGE,
    budget_parser,
    hamiltonian,
    limit,
    potential,
    verify,
)
from elliptic_qdr.scalars import InvalidBudgetError
from elliptic_qdr.utils import InternalInconsistencyError

logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

COMMANDS = {module.NAME: module for module in (potential, hamiltonian, verify, limit)}


def get_parser():
    parser = argparse.ArgumentParser(
        prog='elliptic-qdr',
        description='Quantum double ramification hierarchy of the elliptic curve',
    )
    parser.add_argument('--version', action='version', version='%(prog)s ' + __version__)
    subparsers = parser.add_subparsers(dest='command', help='Available commands')
    subparsers.required = False
    parents = [budget_parser()]
    for module in COMMANDS.values():
        module.add_parser(subparsers, parents)
    return parser


def main(argv=None, stream=None):
    stream = stream or sys.stdout
    parser = get_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if not e.code else EXIT_USAGE
    if args.command is None:
        print('Please, use one of ' + ', '.join('"%s"' % name for name in COMMANDS) + ' or "-h"')
        return EXIT_USAGE

    try:
        return COMMANDS[args.command].run(args, stream)
    except InvalidBudgetError as e:
        logger.error('Invalid budget: %s', e)
        return EXIT_USAGE
    except InternalInconsistencyError as e:
        logger.error('Internal inconsistency: %s', e)
        return EXIT_INCONSISTENT


if __name__ == "__main__":
    sys.exit(main())
