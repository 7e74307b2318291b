"""
Command front ends. Each module exposes add_parser(subparsers, parents)
and run(args, stream) returning the process exit code.
"""
import argparse

from elliptic_qdr.scalars import TruncationBudget
from elliptic_qdr.serialization import OutputFormat
from elliptic_qdr.utils import ExpandFullPath

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILED = 2
EXIT_INCONSISTENT = 3

DEFAULT_BUDGET = TruncationBudget()


def budget_parser():
    """Parent parser with the truncation budget and output flags shared by all commands."""
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument(
        '--q-order',
        dest='q_order',
        type=int,
        default=DEFAULT_BUDGET.q_order,
        help='highest power of q kept',
    )
    parser.add_argument(
        '--eps-order',
        dest='eps_order',
        type=int,
        default=DEFAULT_BUDGET.eps_order,
        help='highest power of eps kept (even)',
    )
    parser.add_argument(
        '--hbar-order',
        dest='hbar_order',
        type=int,
        default=DEFAULT_BUDGET.hbar_order,
        help='highest power of hbar kept',
    )
    parser.add_argument(
        '--u-degree',
        dest='u_degree',
        type=int,
        default=DEFAULT_BUDGET.u_degree,
        help='highest polynomial degree in the u variables',
    )
    parser.add_argument(
        '--dx-degree',
        dest='dx_degree',
        type=int,
        default=DEFAULT_BUDGET.dx_degree,
        help='highest total number of x-derivatives in a monomial',
    )
    parser.add_argument(
        '-f',
        '--format',
        dest='format',
        metavar='FORMAT',
        help='Output format: ' + ', '.join(str(f) for f in OutputFormat),
        type=OutputFormat.from_string,
        choices=list(OutputFormat),
        default=OutputFormat.TEXT,
    )
    parser.add_argument(
        '-o',
        '--out',
        dest='out',
        help='output file (printed to stdout if not given)',
        default=None,
        action=ExpandFullPath,
    )
    return parser


def budget_from_args(args):
    """Raises InvalidBudgetError for negative orders or an odd eps order."""
    return TruncationBudget(
        q_order=args.q_order,
        eps_order=args.eps_order,
        hbar_order=args.hbar_order,
        u_degree=args.u_degree,
        dx_degree=args.dx_degree,
    )
